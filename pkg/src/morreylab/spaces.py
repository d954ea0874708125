"""Norms on sampled functions: L^p(w), weak L^p(w), weighted Morrey, BMO,
BMO(w) and L^inf(w).

Suprema over all balls are replaced by sweeps over a :class:`BallFamily`,
so every sup-type value is a lower bound of the true norm. Averages use the
quadrature volume of each ball (cells whose centres lie inside).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import ball_values, exact_sum
from .weights import Weight, cell_masses, ess_sup
from .validation import DomainError, check_exponent

SPACES = ("lp", "weak-lp", "morrey", "bmo", "weighted-bmo", "weighted-linf")


@dataclass(frozen=True)
class NormSpec:
    space: str
    p: float = 1.0
    kappa: float = 0.0
    mu: Weight = None
    nu: Weight = None
    w: Weight = None
    family: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.space not in SPACES:
            raise DomainError(f"unknown space {self.space!r}")
        if not 0 <= self.kappa < 1:
            raise DomainError(f"kappa must lie in [0, 1), got {self.kappa}")
        if self.space in ("morrey", "bmo", "weighted-bmo", "weighted-linf") and self.family is None:
            raise DomainError(f"{self.space} needs a ball family")


@dataclass(frozen=True)
class SupResult:
    """Value of a sup over balls together with the maximising ball."""

    value: float
    center: np.ndarray = None
    radius: float = None

    def __float__(self):
        return float(self.value)

    def to_dict(self):
        return {
            "value": _json_num(self.value),
            "argmax": None if self.center is None else
            {"center": self.center.tolist(), "radius": self.radius},
        }


def _json_num(x):
    return x if math.isfinite(x) else ("inf" if x > 0 else "nan")


def _unit():
    return Weight.constant(1.0)


def lp_norm(f, p, w=None):
    """(int |f|^p w)^{1/p}."""
    p = check_exponent(p, "p", allow_inf=False)
    masses = cell_masses(w or _unit(), f.grid)
    terms = np.abs(f.values) ** p * masses
    return exact_sum(terms[f.values != 0]) ** (1 / p)


def weak_lp_norm(f, p, w=None, t_range=None):
    """sup_t t w({|f| > t})^{1/p}.

    Evaluated exactly for the sampled function: the sup is approached as t
    rises to each distinct level of |f|, where the level set is {|f| >= t}.
    ``t_range=(lo, hi)`` restricts the sup to lo < t <= hi, which keeps
    cells next to a sampled singularity out of the estimate.
    """
    p = check_exponent(p, "p", allow_inf=False)
    a = np.abs(f.values).ravel()
    masses = cell_masses(w or _unit(), f.grid).ravel()
    keep = a > 0
    if not np.any(keep):
        return 0.0
    a, masses = a[keep], masses[keep]
    order = np.argsort(-a, kind="stable")
    a, masses = a[order], masses[order]
    cum = np.cumsum(masses)
    # last index of each run of equal levels
    last = np.r_[a[1:] != a[:-1], True]
    levels, mass = a[last], cum[last]
    if t_range is None:
        return float(np.max(levels * mass ** (1 / p)))
    lo, hi = (float(t) for t in t_range)
    if not 0 <= lo < hi:
        raise DomainError(f"t_range must satisfy 0 <= lo < hi, got {t_range}")
    cand = [0.0]
    inside = (levels > lo) & (levels <= hi)
    if np.any(inside):
        cand.append(float(np.max(levels[inside] * mass[inside] ** (1 / p))))
    above = levels > hi
    if np.any(above):
        # t = hi sees every level strictly above it
        cand.append(hi * float(mass[above][-1]) ** (1 / p))
    return max(cand)


def _sup(values_by_ball, family):
    best, arg = -math.inf, None
    for ball in family:
        v = values_by_ball(ball)
        if v is None:
            continue
        if v > best or (math.isinf(v) and arg is None):
            best, arg = v, ball
    if arg is None:
        return SupResult(0.0)
    return SupResult(float(best), arg.center, float(arg.radius))


def morrey_norm(f, p, kappa, mu=None, nu=None, family=None, return_argmax=False):
    """sup_B (nu(B)^{-kappa} int_B |f|^p mu)^{1/p}; kappa = 0 gives L^p(mu)."""
    p = check_exponent(p, "p", allow_inf=False)
    kappa = float(kappa)
    if not 0 <= kappa < 1:
        raise DomainError(f"kappa must lie in [0, 1), got {kappa}")
    if family is None:
        raise DomainError("morrey_norm needs a ball family")
    grid = f.grid
    mu_mass = cell_masses(mu or _unit(), grid)
    nu_mass = cell_masses(nu or _unit(), grid)
    fp = np.abs(f.values) ** p * mu_mass
    nz = f.values != 0

    def per_ball(ball):
        vals = ball_values(fp, grid, ball)
        if vals.size == 0:
            return None
        mask = ball_values(nz, grid, ball)
        mass = exact_sum(vals[mask]) if np.any(mask) else 0.0
        if kappa == 0:
            return mass ** (1 / p)
        nu_b = exact_sum(ball_values(nu_mass, grid, ball))
        if not nu_b > 0:
            raise DomainError(f"nu(B) = {nu_b} for ball centre {ball.center}, radius {ball.radius}")
        if math.isinf(nu_b):
            return 0.0
        return (mass / nu_b ** kappa) ** (1 / p)

    res = _sup(per_ball, family)
    return res if return_argmax else res.value


def _oscillation(vals):
    if np.all(vals == vals[0]):
        return 0.0
    m = exact_sum(vals) / vals.size
    return exact_sum(np.abs(vals - m)) / vals.size


def bmo_seminorm(h, family, return_argmax=False):
    """sup_B |B|^{-1} int_B |h - h_B|."""
    grid = h.grid

    def per_ball(ball):
        vals = ball_values(h.values, grid, ball)
        return _oscillation(vals) if vals.size else None

    res = _sup(per_ball, family)
    return res if return_argmax else res.value


def weighted_bmo_norm(h, w, family, return_argmax=False):
    """sup_B (ess sup_B w) |B|^{-1} int_B |h - h_B|."""
    grid = h.grid

    def per_ball(ball):
        vals = ball_values(h.values, grid, ball)
        if not vals.size:
            return None
        osc = _oscillation(vals)
        return 0.0 if osc == 0 else ess_sup(w, ball, grid) * osc

    res = _sup(per_ball, family)
    return res if return_argmax else res.value


def weighted_linf_norm(h, w, family, return_argmax=False):
    """sup_B (ess sup_B w) max_B |h|."""
    grid = h.grid

    def per_ball(ball):
        vals = ball_values(h.values, grid, ball)
        if not vals.size:
            return None
        top = float(np.max(np.abs(vals)))
        return 0.0 if top == 0 else ess_sup(w, ball, grid) * top

    res = _sup(per_ball, family)
    return res if return_argmax else res.value
