"""Weights, weighted measures of balls and Muckenhoupt-Wheeden A(p,q) constants."""

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Ball, SampledFunction, ball_values, exact_sum
from .validation import DomainError, check_alpha, check_dimension, check_exponent

#: brackets above this are reported as divergent
OVERFLOW_GUARD = 1e15


@dataclass(frozen=True)
class Weight:
    """A positive weight: ``constant`` (c), ``power`` (|x|^beta) or ``sampled``."""

    form: str = "constant"
    c: float = 1.0
    beta: float = 0.0
    samples: SampledFunction = field(default=None, repr=False)

    def __post_init__(self):
        if self.form == "constant":
            if not self.c > 0:
                raise DomainError(f"constant weight must be positive, got {self.c}")
        elif self.form == "power":
            if not math.isfinite(self.beta):
                raise DomainError("power weight exponent must be finite")
        elif self.form == "sampled":
            if self.samples is None or np.any(self.samples.values <= 0):
                raise DomainError("sampled weight needs strictly positive samples")
        else:
            raise DomainError(f"unknown weight form {self.form!r}")

    @classmethod
    def constant(cls, c=1.0):
        return cls("constant", c=float(c))

    @classmethod
    def power(cls, beta):
        return cls("power", beta=float(beta))

    @classmethod
    def sampled(cls, f):
        return cls("sampled", samples=f)

    @property
    def is_unit(self):
        return self.form == "constant" and self.c == 1.0

    def __pow__(self, t):
        return weight_pow(self, t)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.form == "constant":
            return np.full(x.shape[:-1] if x.ndim > 1 else x.shape, self.c)
        if self.form == "power":
            r = np.linalg.norm(x, axis=-1) if x.ndim > 1 else np.abs(x)
            with np.errstate(divide="ignore"):
                return r ** self.beta
        return self.samples(x)

    def to_dict(self):
        if self.form == "constant":
            return {"form": "constant", "c": self.c}
        if self.form == "power":
            return {"form": "power", "beta": self.beta}
        return {"form": "sampled"}


def weight_pow(w, t):
    t = float(t)
    if w.form == "constant":
        return Weight.constant(w.c ** t)
    if w.form == "power":
        return Weight.power(w.beta * t)
    if t == 1.0:
        return w
    return Weight.sampled(w.samples.with_values(w.samples.values ** t))


def _power_primitive(x, gamma):
    """Antiderivative of |x|^gamma (gamma > -1), odd in x."""
    return np.sign(x) * np.abs(x) ** (gamma + 1) / (gamma + 1)


def _power_interval(a, b, gamma):
    """int_a^b |x|^gamma dx (a < b); inf when non-integrable."""
    if gamma <= -1 and a < 0 < b:
        return math.inf
    if gamma <= -1 and (a == 0 or b == 0):
        return math.inf
    if gamma == -1:
        return math.log(abs(b) / abs(a)) if a > 0 else math.log(abs(a) / abs(b))
    return float(_power_primitive(b, gamma) - _power_primitive(a, gamma))


def cell_masses(w, grid):
    """Per-cell integrals of ``w`` (exact for constant and 1-d power weights)."""
    check_dimension(grid.n)
    vol = grid.cell_volume
    if w.form == "constant":
        return np.full(grid.shape, w.c * vol)
    if w.form == "sampled":
        if w.samples.grid != grid:
            raise DomainError("sampled weight lives on a different grid")
        return w.samples.values * vol
    beta = w.beta
    if grid.n == 1:
        h = grid.spacing[0]
        edges = grid.box.lo[0] + np.arange(grid.resolution + 1) * h
        if beta <= -1:
            out = np.empty(grid.resolution)
            for i in range(grid.resolution):
                out[i] = _power_interval(edges[i], edges[i + 1], beta)
            return out
        prim = _power_primitive(edges, beta)
        return np.diff(prim)
    pts = grid.points()
    r = np.linalg.norm(pts, axis=1)
    with np.errstate(divide="ignore"):
        out = r ** beta * vol
    # cell containing the origin: equal-area disc
    h = grid.spacing
    lo = np.array(grid.box.lo)
    idx = np.floor(-lo / h).astype(int)
    if np.all((idx >= 0) & (idx < grid.resolution)):
        flat = idx[0] * grid.resolution + idx[1]
        rho = math.sqrt(vol / math.pi)
        out[flat] = 2 * math.pi * rho ** (beta + 2) / (beta + 2) if beta > -2 else math.inf
    return out.reshape(grid.shape)


def _closed_measure(w, ball):
    """w(B) in closed form where available, else None."""
    if w.form == "constant":
        return w.c * ball.volume
    if w.form == "power":
        c, r = ball.center, ball.radius
        if ball.n == 1:
            return _power_interval(c[0] - r, c[0] + r, w.beta)
        if not np.any(c):
            if w.beta <= -2:
                return math.inf
            return 2 * math.pi * r ** (w.beta + 2) / (w.beta + 2)
    return None


def _grid_measure(w, ball, grid):
    masses = ball_values(cell_masses(w, grid), grid, ball)
    return exact_sum(masses) if masses.size else 0.0, masses.size * grid.cell_volume


def w_measure(w, ball, grid=None):
    """w(B) = int_B w.

    Closed form for constant weights, power weights on the line and power
    weights on origin-centred discs; grid quadrature otherwise. Raises when
    the power weight is not integrable on the ball.
    """
    value = _closed_measure(w, ball)
    if value is None:
        if grid is None:
            raise DomainError("a grid is needed to integrate this weight")
        value, _ = _grid_measure(w, ball, grid)
    if math.isinf(value):
        raise DomainError(f"power weight |x|^{w.beta} is not locally integrable on {ball}")
    return value


def _ball_average(w, ball, grid):
    value = _closed_measure(w, ball)
    if value is not None:
        return value / ball.volume
    value, vol = _grid_measure(w, ball, grid)
    if vol == 0:
        return math.nan
    return value / vol


def ess_sup(w, ball, grid=None):
    """Essential sup of ``w`` over an open ball.

    Exact for constant and power weights; max over cell centres for sampled
    weights.
    """
    if w.form == "constant":
        return w.c
    if w.form == "power":
        d_near = max(0.0, float(np.linalg.norm(ball.center)) - ball.radius)
        d_far = float(np.linalg.norm(ball.center)) + ball.radius
        if w.beta >= 0:
            return d_far ** w.beta
        return math.inf if d_near == 0 else d_near ** w.beta
    vals = ball_values(w.samples.values, w.samples.grid, ball)
    return float(vals.max()) if vals.size else math.nan


def ess_inf(w, ball, grid=None):
    if w.form == "constant":
        return w.c
    if w.form == "power":
        d_near = max(0.0, float(np.linalg.norm(ball.center)) - ball.radius)
        d_far = float(np.linalg.norm(ball.center)) + ball.radius
        if w.beta >= 0:
            return 0.0 if (d_near == 0 and w.beta > 0) else d_near ** w.beta
        return d_far ** w.beta
    vals = ball_values(w.samples.values, w.samples.grid, ball)
    return float(vals.min()) if vals.size else math.nan


def conjugate_exponent(p):
    p = check_exponent(p, "p")
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


@dataclass(frozen=True)
class ExponentRecord:
    n: int
    alpha: float
    p: float
    q: float
    s: float
    p_prime: float
    q_prime: float
    kappa: float
    s_prime: float
    s_prime_times_conj: float


def exponent_identities(p, q, alpha, n, s=math.inf, tol=1e-12):
    """Derived exponents for the critical-index estimates.

    Checks 1/q = 1/p - alpha/n and p >= s', then verifies
    1/p' + 1/q = 1 - alpha/n and s'(p/s')' = p s'/(p - s') to ``tol``.
    ``q=None`` derives q from the other three.
    """
    n = check_dimension(n)
    alpha = check_alpha(alpha, n)
    p = check_exponent(p, "p", allow_inf=False)
    s = check_exponent(s, "s", strict=True)
    inv_q = 1 / p - alpha / n
    if not inv_q > 0:
        raise DomainError(f"p must be < n/alpha = {n / alpha}, got {p}")
    if q is None:
        q = 1 / inv_q
    q = float(q)
    if abs(1 / q - inv_q) > tol:
        raise DomainError(f"inconsistent exponents: 1/q = {1 / q} but 1/p - alpha/n = {inv_q}")
    s_prime = conjugate_exponent(s)
    if p < s_prime - tol:
        raise DomainError(f"need p >= s' = {s_prime}, got p = {p}")
    p_prime = conjugate_exponent(p)
    q_prime = conjugate_exponent(q)
    lhs = (0.0 if math.isinf(p_prime) else 1 / p_prime) + 1 / q
    if abs(lhs - (1 - alpha / n)) > tol:
        raise DomainError("1/p' + 1/q != 1 - alpha/n")
    ratio = p / s_prime
    if abs(ratio - 1) <= tol:
        conj = math.inf
        direct = math.inf
    else:
        conj = s_prime * conjugate_exponent(ratio)
        direct = p * s_prime / (p - s_prime)
        if abs(conj - direct) > tol * max(1.0, abs(direct)):
            raise DomainError("s'(p/s')' != p s'/(p - s')")
    return ExponentRecord(n, alpha, p, q, s, p_prime, q_prime, p / q, s_prime, conj)


@dataclass
class ApqReport:
    p: float
    q: float
    regime: str
    centers: np.ndarray = field(repr=False)
    radii: np.ndarray = field(repr=False)
    brackets: np.ndarray = field(repr=False)
    constant: float
    base_constant: float
    divergence_flag: bool

    @property
    def argmax(self):
        k = int(np.nanargmax(np.where(np.isfinite(self.brackets), self.brackets, np.inf)))
        return self.centers[k], float(self.radii[k])

    def to_dict(self):
        center, radius = self.argmax
        return {
            "p": self.p, "q": _json_num(self.q), "regime": self.regime,
            "constant": self.constant, "base_constant": self.base_constant,
            "divergence_flag": self.divergence_flag,
            "argmax": {"center": center.tolist(), "radius": radius},
            "balls": [
                {"center": c.tolist(), "radius": float(r), "bracket": _json_num(b)}
                for c, r, b in zip(self.centers, self.radii, self.brackets)
            ],
        }


def _json_num(x):
    x = float(x)
    return x if math.isfinite(x) else ("inf" if x > 0 else "nan")


def _regime(p, q):
    if p == 1 and 1 < q < math.inf:
        return "A(1,q)"
    if math.isinf(q) and 1 < p < math.inf:
        return "A(p,inf)"
    if 1 < p < q < math.inf:
        return "A(p,q)"
    raise DomainError(f"(p, q) = ({p}, {q}) is outside the A(p,q) regimes")


def apq_bracket(w, p, q, ball, grid=None):
    """Regime-appropriate A(p,q) product for one ball (may be inf)."""
    regime = _regime(p, q)
    if regime == "A(1,q)":
        lo = ess_inf(w, ball, grid)
        left = _ball_average(weight_pow(w, q), ball, grid) ** (1 / q)
        right = math.inf if lo == 0 else 1 / lo
    else:
        pp = conjugate_exponent(p)
        right = _ball_average(weight_pow(w, -pp), ball, grid) ** (1 / pp)
        if regime == "A(p,inf)":
            left = ess_sup(w, ball, grid)
        else:
            left = _ball_average(weight_pow(w, q), ball, grid) ** (1 / q)
    with np.errstate(invalid="ignore"):
        value = left * right
    return math.inf if math.isnan(value) and (math.isinf(left) or math.isinf(right)) else value


def apq_constant(w, p, q, family, grid=None, growth_limit=10.0):
    """sup over ``family`` of the A(p,q) bracket.

    ``base_constant`` is the sup over the middle half of the radius ladder;
    the weight is flagged divergent when a bracket is non-finite or exceeds
    ``OVERFLOW_GUARD``, or when extending to the full ladder multiplies the
    constant by more than ``growth_limit``.
    """
    p = check_exponent(p, "p", allow_inf=False)
    q = check_exponent(q, "q", strict=True)
    regime = _regime(p, q)
    if len(family) == 0:
        raise DomainError("empty ball family")
    centers, radii, brackets = [], [], []
    for ball in family:
        centers.append(ball.center)
        radii.append(ball.radius)
        brackets.append(apq_bracket(w, p, q, ball, grid))
    brackets = np.array(brackets, dtype=float)
    radii = np.array(radii)
    finite = np.isfinite(brackets) & (brackets <= OVERFLOW_GUARD)
    diverged = bool(np.any(~finite & ~np.isnan(brackets)))
    constant = float(np.nanmax(np.where(finite, brackets, OVERFLOW_GUARD)))
    ladder = family.radii
    m = len(ladder)
    lo_k, hi_k = m // 4, m - m // 4
    core = (radii >= ladder[lo_k]) & (radii <= ladder[max(lo_k, hi_k - 1)])
    core_vals = np.where(finite, brackets, OVERFLOW_GUARD)[core]
    base = float(np.nanmax(core_vals)) if core_vals.size else constant
    if base > 0 and constant > growth_limit * base:
        diverged = True
    return ApqReport(p, q, regime, np.array(centers), radii, brackets,
                     min(constant, OVERFLOW_GUARD), base, diverged)
