"""Ratio studies for the critical-index boundedness estimates.

Each study evaluates a numerator (a norm of the operator output) and a
denominator (a norm of the input) over a family of test functions and
records the ratios. Under exact scale invariance the ratios along a dilation
ladder must be constant, which is what the spread and log-log slope
diagnostics measure.
"""

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import SampledFunction, centered_grid
from .kernels import HomogeneousKernel
from .operators import (gamma_alpha, homogeneous_fractional_integral, maximal_on_grid,
                        riesz_potential, riesz_potential_at)
from .spaces import bmo_seminorm, lp_norm, morrey_norm, weighted_linf_norm
from .validation import DomainError, check_alpha
from .weights import (Weight, apq_constant, conjugate_exponent, exponent_identities,
                      weight_pow)
from .geometry import BallFamily

MIN_DENOMINATOR = 1e-10
GENERATORS = ("gaussian-bump", "indicator-ball", "tent", "dilation-ladder", "translation-ladder")


@dataclass(frozen=True)
class TestFamily:
    """A list of compactly supported test functions.

    ``gaussian-bump`` (center, width, amplitude, cutoff in widths),
    ``indicator-ball`` (center, radius), ``tent`` (center, radius),
    ``dilation-ladder`` (base, lambdas) giving f(lambda x), and
    ``translation-ladder`` (base, shifts) giving f(x - shift).
    """

    __test__ = False

    generator: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise DomainError(f"unknown test-function generator {self.generator!r}")

    def _base(self):
        base = self.params["base"]
        return base if isinstance(base, TestFamily) else TestFamily(base["generator"], {
            k: v for k, v in base.items() if k != "generator"})

    def members(self):
        """List of (parameter, callable) pairs; callables map (m, n) points to values."""
        g, p = self.generator, self.params
        if g == "dilation-ladder":
            (_, base), = self._base().members()
            return [(float(lam), _dilate(base, float(lam))) for lam in p["lambdas"]]
        if g == "translation-ladder":
            (_, base), = self._base().members()
            return [(float(np.linalg.norm(s)), _translate(base, np.atleast_1d(np.asarray(s, float))))
                    for s in p["shifts"]]
        center = np.atleast_1d(np.asarray(p.get("center", [0.0]), dtype=float))
        amp = float(p.get("amplitude", 1.0))
        if g == "gaussian-bump":
            width = float(p.get("width", 1.0))
            cutoff = float(p.get("cutoff", 6.0))

            def bump(x):
                r2 = np.sum((x - center) ** 2, axis=1) / width ** 2
                return np.where(r2 < cutoff ** 2, amp * np.exp(-r2 / 2), 0.0)

            return [(1.0, bump)]
        radius = float(p.get("radius", 1.0))
        if g == "indicator-ball":
            return [(1.0, lambda x: amp * (np.linalg.norm(x - center, axis=1) <= radius))]
        return [(1.0, lambda x: amp * np.maximum(0.0, 1 - np.linalg.norm(x - center, axis=1) / radius))]

    def sample(self, grid):
        oversample = int(self.params.get("oversample", 1))
        out = []
        for param, func in self.members():
            f = SampledFunction.from_callable(func, grid, oversample=oversample)
            out.append((param, f))
        return out


def _dilate(func, lam):
    return lambda x: func(lam * x)


def _translate(func, shift):
    return lambda x: func(x - shift)


@dataclass
class RatioReport:
    experiment: str
    params: dict
    samples: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    spread: float = math.nan
    slope: float = None
    passed: bool = False
    notes: list = field(default_factory=list)

    @property
    def ratios(self):
        return np.array([s["ratio"] for s in self.samples])

    @property
    def numerators(self):
        return np.array([s["numerator"] for s in self.samples])

    @property
    def denominators(self):
        return np.array([s["denominator"] for s in self.samples])

    @property
    def lambdas(self):
        return np.array([s["lambda"] for s in self.samples])

    def to_dict(self):
        return {
            "experiment": self.experiment,
            "params": self.params,
            "samples": self.samples,
            "skipped": self.skipped,
            "tolerances": self.tolerances,
            "spread": self.spread,
            "slope": self.slope,
            "passed": self.passed,
            "notes": self.notes,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["sample_id", "lambda", "numerator", "denominator", "ratio"])
        for s in self.samples:
            writer.writerow([s["sample_id"], repr(s["lambda"]), repr(s["numerator"]),
                             repr(s["denominator"]), repr(s["ratio"])])
        return buf.getvalue()


def _finish(report, dilation, default_spread=1.05, default_slope=0.02):
    tol = report.tolerances
    tol.setdefault("spread", default_spread)
    if dilation:
        tol.setdefault("slope", default_slope)
    ratios = report.ratios
    if len(ratios) == 0:
        report.passed = False
        report.notes.append("no admissible samples")
        return report
    report.spread = float(ratios.max() / ratios.min())
    ok = bool(np.all(np.isfinite(ratios)) and np.all(ratios > 0)) and report.spread <= tol["spread"]
    if dilation and len(ratios) >= 2:
        report.slope = float(np.polyfit(np.log(report.lambdas), np.log(ratios), 1)[0])
        ok = ok and abs(report.slope) <= tol["slope"]
    report.passed = ok
    return report


def _record(report, k, lam, num, den):
    if not den > MIN_DENOMINATOR:
        report.skipped.append({"sample_id": k, "lambda": lam, "reason": "denominator below 1e-10"})
        return
    report.samples.append({"sample_id": k, "lambda": lam, "numerator": float(num),
                           "denominator": float(den), "ratio": float(num / den)})


def standard_sweep(n, r_exp=6):
    """Origin plus dyadic offsets, radii 2^-r_exp .. 2^r_exp, for weight-class scans."""
    offs = [0.0] + [s * 2.0 ** j for j in range(-r_exp, r_exp + 1) for s in (1, -1)]
    if n == 1:
        centers = np.array(offs)[:, None]
    else:
        centers = np.array([[o, 0.0] for o in offs])
    radii = 2.0 ** np.arange(-r_exp, r_exp + 1)
    return BallFamily(centers, radii)


def check_weight_class(w, p, q, n, grid=None, family=None):
    """Raise DomainError unless ``w`` passes the A(p,q) scan."""
    family = family or standard_sweep(n)
    report = apq_constant(w, p, q, family, grid)
    if report.divergence_flag:
        raise DomainError(f"weight {w.to_dict()} fails the {report.regime} scan "
                          f"(p={p}, q={q}, constant={report.constant:.3g})")
    return report


def _weight_scan_for_theorem2(w, p, q, s, n, grid):
    sp = conjugate_exponent(s)
    ws = weight_pow(w, sp)
    pp, qq = p / sp, q / sp
    if abs(pp - 1) < 1e-12:
        pp = 1.0
    return check_weight_class(ws, pp, qq, n, grid)


def _is_dilation(family):
    return family.generator == "dilation-ladder"


def _study_params(name, grid, alpha, p, q, kappa, s, kernel, w, family, balls):
    return {
        "study": name,
        "n": grid.n, "alpha": alpha, "p": p, "q": _num(q), "kappa": kappa, "s": _num(s),
        "kernel": None if kernel is None else kernel.to_dict(),
        "weight": w.to_dict(),
        "family": _family_dict(family),
        "grid": {"lo": list(grid.box.lo), "hi": list(grid.box.hi), "resolution": grid.resolution},
        "balls": {"centers": balls.centers.tolist(), "radii": balls.radii.tolist()},
    }


def _num(x):
    return "inf" if math.isinf(x) else x


def _family_dict(family):
    d = {"generator": family.generator}
    for k, v in family.params.items():
        d[k] = _family_dict(v) if isinstance(v, TestFamily) else v
    return d


def verify_theorem2(family, grid, balls, alpha, p, kernel=None, weight=None, s=math.inf,
                    tolerances=None):
    """BMO(T_{Omega,alpha} f) / ||f||_{L^{p,kappa}(w^p, w^q)} with kappa = p/q.

    ``kernel=None`` uses the Riesz potential I_alpha in the numerator.
    """
    n = grid.n
    w = weight or Weight.constant(1.0)
    rec = exponent_identities(p, None, alpha, n, s)
    _weight_scan_for_theorem2(w, rec.p, rec.q, rec.s, n, grid)
    mu, nu = weight_pow(w, rec.p), weight_pow(w, rec.q)
    report = RatioReport("theorem2",
                         _study_params("theorem2", grid, rec.alpha, rec.p, rec.q, rec.kappa, rec.s,
                                       kernel, w, family, balls),
                         tolerances=dict(tolerances or {}))
    for k, (lam, f) in enumerate(family.sample(grid)):
        den = morrey_norm(f, rec.p, rec.kappa, mu, nu, balls)
        if not den > MIN_DENOMINATOR:
            _record(report, k, lam, 0.0, den)
            continue
        if kernel is None:
            h = riesz_potential(f, rec.alpha)
        else:
            h = homogeneous_fractional_integral(f, kernel, rec.alpha)
        _record(report, k, lam, bmo_seminorm(h, balls), den)
    return _finish(report, _is_dilation(family))


def verify_theorem1(family, grid, balls, alpha, kernel=None, weight=None, s=math.inf,
                    tolerances=None):
    """||M_{Omega,alpha} f||_{L^inf(w)} / ||f||_{L^{n/alpha}(w^{n/alpha})}."""
    n = grid.n
    alpha = check_alpha(alpha, n)
    p = n / alpha
    if not s > n / (n - alpha):
        raise DomainError(f"need s > n/(n-alpha) = {n / (n - alpha)}, got s = {s}")
    w = weight or Weight.constant(1.0)
    sp = conjugate_exponent(s)
    check_weight_class(weight_pow(w, sp), p / sp, math.inf, n, grid)
    report = RatioReport("theorem1",
                         _study_params("theorem1", grid, alpha, p, math.inf, 0.0, s, kernel, w,
                                       family, balls),
                         tolerances=dict(tolerances or {}))
    wp = weight_pow(w, p)
    for k, (lam, f) in enumerate(family.sample(grid)):
        den = lp_norm(f, p, wp)
        if not den > MIN_DENOMINATOR:
            _record(report, k, lam, 0.0, den)
            continue
        m = maximal_on_grid(f, alpha, balls.radii, kernel)
        _record(report, k, lam, weighted_linf_norm(m, w, balls), den)
    return _finish(report, _is_dilation(family))


def verify_theorem3(family, grid, balls, alpha, p, kernel=None, weight=None, s=math.inf,
                    tolerances=None):
    """sup_x M_{Omega,alpha} f(x) / ||f||_{L^{p,kappa}(w^p, w^q)} with kappa = p/q."""
    n = grid.n
    w = weight or Weight.constant(1.0)
    rec = exponent_identities(p, None, alpha, n, s)
    _weight_scan_for_theorem2(w, rec.p, rec.q, rec.s, n, grid)
    mu, nu = weight_pow(w, rec.p), weight_pow(w, rec.q)
    report = RatioReport("theorem3",
                         _study_params("theorem3", grid, rec.alpha, rec.p, rec.q, rec.kappa, rec.s,
                                       kernel, w, family, balls),
                         tolerances=dict(tolerances or {}))
    for k, (lam, f) in enumerate(family.sample(grid)):
        den = morrey_norm(f, rec.p, rec.kappa, mu, nu, balls)
        if not den > MIN_DENOMINATOR:
            _record(report, k, lam, 0.0, den)
            continue
        m = maximal_on_grid(f, rec.alpha, balls.radii, kernel)
        _record(report, k, lam, float(m.values.max()), den)
    return _finish(report, _is_dilation(family))


def probe_witness(alpha, eps):
    """|x|^{-alpha} / log(1/|x|) on eps < |x| < 1/2, zero elsewhere."""

    def f(x):
        r = np.linalg.norm(x, axis=1)
        out = np.zeros(len(r))
        m = (r > eps) & (r < 0.5)
        out[m] = r[m] ** (-alpha) / np.log(1 / r[m])
        return out

    return f


def unboundedness_probe(n=1, alpha=0.5, cutoffs=None, resolution=32769):
    """I_alpha f_eps(0) against ||f_eps||_{L^{n/alpha}} along eps -> 0.

    The norms converge while the potential at the origin grows like
    log log(1/eps), so the ratio column must increase without bound.
    On the line both quantities come from the grid operators; in the plane
    they are evaluated in polar coordinates (the witness is radial).
    """
    alpha = check_alpha(alpha, n)
    if cutoffs is None:
        cutoffs = [2.0 ** -k for k in range(4, 13)]
    cutoffs = [float(e) for e in cutoffs]
    if any(not 0 < e < 0.5 for e in cutoffs):
        raise DomainError("cutoffs must lie in (0, 1/2)")
    p = n / alpha
    report = RatioReport("unboundedness", {"study": "unboundedness", "n": n, "alpha": alpha,
                                           "p": p, "cutoffs": cutoffs, "resolution": resolution})
    if n == 1:
        grid = centered_grid(0.5, resolution)
        origin = np.zeros(1)
    for k, eps in enumerate(cutoffs):
        if n == 1:
            f = SampledFunction.from_callable(probe_witness(alpha, eps), grid)
            num = riesz_potential_at(f, alpha, origin)
            den = lp_norm(f, p)
        else:
            num, den = _radial_probe(n, alpha, eps)
        _record(report, k, eps, num, den)
    ratios = report.ratios
    dens = report.denominators
    inc = np.diff(dens)
    report.notes.append({"norm_increments": inc.tolist(),
                         "norm_increment_ratios": (inc[1:] / inc[:-1]).tolist()})
    report.tolerances = {"ratio": "strictly increasing", "norm": "increments decreasing"}
    report.spread = float(ratios.max() / ratios.min())
    report.passed = bool(np.all(np.diff(ratios) > 0) and np.all(inc > 0)
                         and np.all(np.diff(inc) < 0))
    return report


def _radial_probe(n, alpha, eps, points=20000):
    t = np.geomspace(eps, 0.5, points + 1)
    mid = np.sqrt(t[1:] * t[:-1])
    dt = np.diff(t)
    area = 2 * math.pi
    p = n / alpha
    f = mid ** (-alpha) / np.log(1 / mid)
    norm = (area * math.fsum((f ** p * mid ** (n - 1) * dt).tolist())) ** (1 / p)
    pot = area * math.fsum((mid ** (alpha - n) * f * mid ** (n - 1) * dt).tolist())
    return pot / gamma_alpha(alpha, n), norm


def semigroup_check(beta, gamma, f, tolerance=0.05):
    """Relative sup discrepancy of I_beta(I_gamma f) and I_{beta+gamma} f on the
    middle half of the box."""
    n = f.grid.n
    beta = check_alpha(beta, n)
    gamma = check_alpha(gamma, n)
    if not beta + gamma < n:
        raise DomainError(f"beta + gamma must be < {n}, got {beta + gamma}")
    composed = riesz_potential(riesz_potential(f, gamma), beta)
    direct = riesz_potential(f, beta + gamma)
    mid = np.ones(f.grid.shape, dtype=bool)
    for k in range(n):
        ax = f.grid.axis(k)
        c, half = f.grid.box.center[k], f.grid.box.widths[k] / 4
        sel = np.abs(ax - c) < half
        shape = [1] * n
        shape[k] = -1
        mid &= sel.reshape(shape)
    diff = float(np.max(np.abs(composed.values - direct.values)[mid]))
    scale = float(np.max(np.abs(direct.values[mid])))
    rel = diff / scale if scale > 0 else 0.0
    report = RatioReport("semigroup", {"study": "semigroup", "beta": beta, "gamma": gamma, "n": n},
                         tolerances={"relative": tolerance})
    report.samples.append({"sample_id": 0, "lambda": 1.0, "numerator": diff,
                           "denominator": scale, "ratio": rel})
    report.spread = 1.0
    report.passed = rel <= tolerance
    return report
