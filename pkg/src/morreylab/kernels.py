"""Degree-zero homogeneous kernels on the unit sphere.

A kernel is stored through its restriction to the sphere: two values for
n = 1 (at +1 and -1) and a function of the polar angle for n = 2. Sphere
integrals use the unnormalised surface measure (arc length, total 2*pi, on
the circle; counting measure on {-1, +1}).
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .validation import DomainError, check_alpha, check_dimension, check_exponent

#: angle samples used for every quadrature on the circle
THETA_POINTS = 4096
#: rotation-angle magnitudes for the modulus-of-continuity sup search
PHI_POINTS = 4096
_PHI_MIN = 1e-8

FORMS = ("constant", "two-values", "cos-harmonic", "sin-harmonic", "tabulated")


@dataclass(frozen=True)
class HomogeneousKernel:
    """Omega(x) = Omega(x/|x|).

    Parameters
    ----------
    n : int
        Dimension, 1 or 2.
    form : str
        One of ``FORMS``.
    c : float
        Value of a constant kernel.
    a, b : float
        ``two-values`` kernel on the line: Omega(x) = a for x > 0, b for x < 0.
    k : int
        Harmonic index for ``cos-harmonic``/``sin-harmonic``.
    theta, table : tuple
        Samples of a ``tabulated`` kernel on [0, 2*pi), linearly
        interpolated with periodic wrap-around.
    """

    n: int
    form: str = "constant"
    c: float = 1.0
    a: float = 1.0
    b: float = 1.0
    k: int = 1
    theta: tuple = field(default=(), repr=False)
    table: tuple = field(default=(), repr=False)

    def __post_init__(self):
        check_dimension(self.n)
        if self.form not in FORMS:
            raise DomainError(f"unknown kernel form {self.form!r}")
        if self.form == "two-values" and self.n != 1:
            raise DomainError("two-values kernels live on the line (n = 1)")
        if self.form in ("cos-harmonic", "sin-harmonic", "tabulated") and self.n != 2:
            raise DomainError(f"{self.form} kernels need n = 2")
        if self.form == "tabulated":
            th = np.asarray(self.theta, dtype=float)
            vals = np.asarray(self.table, dtype=float)
            if th.shape != vals.shape or th.ndim != 1 or th.size < 8:
                raise DomainError("tabulated kernel needs >= 8 matching theta/value samples")
            if np.any(np.diff(th) <= 0) or th[0] < 0 or th[-1] >= 2 * math.pi:
                raise DomainError("tabulated theta must increase strictly within [0, 2*pi)")
            object.__setattr__(self, "theta", tuple(th.tolist()))
            object.__setattr__(self, "table", tuple(vals.tolist()))

    # construction shortcuts
    @classmethod
    def constant(cls, c=1.0, n=2):
        return cls(n=n, form="constant", c=float(c))

    @classmethod
    def two_values(cls, a, b):
        return cls(n=1, form="two-values", a=float(a), b=float(b))

    @classmethod
    def cos_harmonic(cls, k=1):
        return cls(n=2, form="cos-harmonic", k=int(k))

    @classmethod
    def sin_harmonic(cls, k=1):
        return cls(n=2, form="sin-harmonic", k=int(k))

    @classmethod
    def tabulated(cls, theta, values):
        return cls(n=2, form="tabulated", theta=tuple(theta), table=tuple(values))

    def on_circle(self, theta):
        """Omega at angle ``theta`` (n = 2)."""
        theta = np.asarray(theta, dtype=float)
        if self.form == "constant":
            return np.full(theta.shape, self.c)
        if self.form == "cos-harmonic":
            return np.cos(self.k * theta)
        if self.form == "sin-harmonic":
            return np.sin(self.k * theta)
        if self.form == "tabulated":
            return np.interp(np.mod(theta, 2 * math.pi), self.theta, self.table,
                             period=2 * math.pi)
        raise DomainError(f"{self.form} kernel has no angular form")

    def sphere_samples(self):
        """(values, weights) of a quadrature rule for the sphere S^{n-1}."""
        if self.n == 1:
            vals = np.array([self.a, self.b]) if self.form == "two-values" else np.array([self.c, self.c])
            return vals, np.ones(2)
        th = _theta_grid()
        return self.on_circle(th), np.full(th.size, 2 * math.pi / th.size)

    def mean_on_sphere(self, absolute=False):
        vals, wts = self.sphere_samples()
        if absolute:
            vals = np.abs(vals)
        return float(np.dot(vals, wts) / wts.sum())

    def sup_abs(self):
        if self.form == "constant":
            return abs(self.c)
        if self.form == "two-values":
            return max(abs(self.a), abs(self.b))
        if self.form in ("cos-harmonic", "sin-harmonic"):
            return 1.0
        return float(np.max(np.abs(self.table)))

    def to_dict(self):
        d = {"n": self.n, "form": self.form}
        if self.form == "constant":
            d["c"] = self.c
        elif self.form == "two-values":
            d.update(a=self.a, b=self.b)
        elif self.form in ("cos-harmonic", "sin-harmonic"):
            d["k"] = self.k
        else:
            d.update(theta=list(self.theta), values=list(self.table))
        return d


@lru_cache(maxsize=None)
def _theta_grid():
    return 2 * math.pi * np.arange(THETA_POINTS) / THETA_POINTS


def kernel_eval(kernel, x):
    """Evaluate Omega at nonzero points.

    ``x`` is a point or an array of points with trailing axis ``n`` (a plain
    1-d array is accepted for n = 1). Raises DomainError at the origin.
    """
    x = np.asarray(x, dtype=float)
    scalar = False
    if kernel.n == 1:
        if x.ndim == 0:
            scalar = True
            x = x[None]
        elif x.shape[-1:] == (1,):
            x = x[..., 0]
        if np.any(x == 0):
            raise DomainError("kernel evaluated at the origin")
        if kernel.form == "two-values":
            out = np.where(x > 0, kernel.a, kernel.b)
        else:
            out = np.full(x.shape, kernel.c)
        return float(out[0]) if scalar else out
    if x.shape[-1] != 2:
        raise DomainError(f"expected points in R^2, got shape {x.shape}")
    if x.ndim == 1:
        scalar = True
        x = x[None]
    if np.any((x[..., 0] == 0) & (x[..., 1] == 0)):
        raise DomainError("kernel evaluated at the origin")
    out = kernel.on_circle(np.arctan2(x[..., 1], x[..., 0]))
    return float(out[0]) if scalar else out


def sphere_norm(kernel, s):
    """||Omega||_{L^s(S^{n-1})} for the unnormalised surface measure."""
    s = check_exponent(s, "s")
    vals, wts = kernel.sphere_samples()
    if math.isinf(s):
        return kernel.sup_abs()
    return float(np.dot(np.abs(vals) ** s, wts) ** (1.0 / s))


def rotation_size(phi):
    """||rho - I|| for the planar rotation by ``phi``."""
    return 2.0 * np.abs(np.sin(np.asarray(phi) / 2.0))


@lru_cache(maxsize=None)
def _phi_grid():
    mags = np.geomspace(_PHI_MIN, math.pi, PHI_POINTS)
    return mags


@lru_cache(maxsize=64)
def _rotation_profile(kernel, s):
    """sup-ready profile: sizes |rho| (sorted) and running max of ||Omega(rho.) - Omega||_s."""
    th = _theta_grid()
    base = kernel.on_circle(th)
    mags = _phi_grid()
    dtheta = 2 * math.pi / th.size
    best = np.zeros(mags.size)
    chunk = 128
    for sign in (1.0, -1.0):
        for start in range(0, mags.size, chunk):
            phis = sign * mags[start:start + chunk]
            diff = np.abs(kernel.on_circle(th[None, :] + phis[:, None]) - base[None, :])
            if math.isinf(s):
                vals = diff.max(axis=1)
            else:
                vals = (np.sum(diff ** s, axis=1) * dtheta) ** (1.0 / s)
            best[start:start + chunk] = np.maximum(best[start:start + chunk], vals)
    sizes = rotation_size(mags)
    order = np.argsort(sizes, kind="stable")
    return sizes[order], np.maximum.accumulate(best[order])


def modulus_of_continuity(kernel, s, delta):
    """omega_s(delta): sup over planar rotations with |rho| < delta of
    ||Omega(rho .) - Omega||_{L^s(S^1)}.

    The sup runs over a fixed log-spaced angle grid, so the value is a lower
    bound of the true modulus and exactly nondecreasing in ``delta``. On the
    line the only rotations are the identity and the reflection, and the
    modulus is taken to be 0.
    """
    s = check_exponent(s, "s")
    delta = np.asarray(delta, dtype=float)
    if np.any(delta <= 0) or np.any(delta > 2):
        raise DomainError("delta must lie in (0, 2]")
    if kernel.n == 1 or kernel.form == "constant":
        out = np.zeros(delta.shape)
    else:
        sizes, running = _rotation_profile(kernel, s)
        pos = np.searchsorted(sizes, delta, side="left")
        out = np.where(pos > 0, running[np.maximum(pos - 1, 0)], 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ModulusProfile:
    s: float
    deltas: np.ndarray = field(repr=False)
    omega_values: np.ndarray = field(repr=False)
    dini_value: float
    last_decade_increment: float
    previous_decade_increment: float

    @property
    def divergent(self):
        """True when the per-decade increments fail to decay."""
        if self.previous_decade_increment <= 0:
            return False
        return self.last_decade_increment >= 0.5 * self.previous_decade_increment


_PER_DECADE = 64


def _log_integral(kernel, s, lo, hi):
    if hi <= lo:
        return 0.0
    m = max(2, int(math.ceil(_PER_DECADE * math.log10(hi / lo))) + 1)
    deltas = np.geomspace(lo, hi, m)
    om = modulus_of_continuity(kernel, s, deltas)
    return _trapz(om, np.log(deltas))


def dini_profile(kernel, s, delta_min):
    s = check_exponent(s, "s")
    delta_min = float(delta_min)
    if not 0 < delta_min < 1:
        raise DomainError(f"delta_min must lie in (0, 1), got {delta_min}")
    m = max(2, int(math.ceil(_PER_DECADE * math.log10(1 / delta_min))) + 1)
    deltas = np.geomspace(delta_min, 1.0, m)
    om = modulus_of_continuity(kernel, s, deltas)
    value = _trapz(om, np.log(deltas))
    last = _log_integral(kernel, s, delta_min, min(1.0, 10 * delta_min))
    prev = _log_integral(kernel, s, min(1.0, 10 * delta_min), min(1.0, 100 * delta_min))
    return ModulusProfile(s, deltas, om, value, last, prev)


def dini_integral(kernel, s, delta_min):
    """Log-spaced trapezoid approximation of int_{delta_min}^1 omega_s(d) dd/d."""
    return dini_profile(kernel, s, delta_min).dini_value


def _trapz(y, x):
    y = np.asarray(y)
    x = np.asarray(x)
    return float(np.sum((y[1:] + y[:-1]) * np.diff(x)) / 2)


def _check_lemma_args(kernel, alpha, R, x):
    alpha = check_alpha(alpha, kernel.n)
    R = float(R)
    if not R > 0:
        raise DomainError(f"R must be positive, got {R}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (kernel.n,):
        raise DomainError(f"x must be a point in R^{kernel.n}")
    if not np.linalg.norm(x) < R / 2:
        raise DomainError("the kernel-difference estimate needs |x| < R/2")
    return alpha, R, x


def _kernel_term(kernel, z, alpha):
    r = np.linalg.norm(z, axis=-1) if kernel.n == 2 else np.abs(z[..., 0])
    return kernel_eval(kernel, z) * r ** (alpha - kernel.n)


def lemma_difference_lhs(kernel, alpha, s, R, x, radial=512, angular=1024):
    """(int_{R<=|z|<2R} |Omega(z-x)/|z-x|^{n-a} - Omega(z)/|z|^{n-a}|^s dz)^{1/s}.

    Midpoint rule on a polar grid over the annulus (two intervals when n = 1).
    """
    alpha, R, x = _check_lemma_args(kernel, alpha, R, x)
    s = check_exponent(s, "s")
    rho = R + (np.arange(radial) + 0.5) * (R / radial)
    if kernel.n == 1:
        z = np.concatenate([rho, -rho])[:, None]
        jac = np.full(z.shape[0], R / radial)
    else:
        th = (np.arange(angular) + 0.5) * (2 * math.pi / angular)
        rr, tt = np.meshgrid(rho, th, indexing="ij")
        z = np.stack([rr * np.cos(tt), rr * np.sin(tt)], axis=-1).reshape(-1, 2)
        jac = (rr * (R / radial) * (2 * math.pi / angular)).ravel()
    if not np.any(x):
        return 0.0
    diff = np.abs(_kernel_term(kernel, z - x, alpha) - _kernel_term(kernel, z, alpha))
    if math.isinf(s):
        return float(diff.max())
    return float(np.sum(diff ** s * jac) ** (1.0 / s))


def lemma_difference_rhs(kernel, s, alpha, R, x):
    """R^{n/s-(n-alpha)} (|x|/R + int_{|x|/2R}^{|x|/R} omega_s(d) dd/d)."""
    alpha, R, x = _check_lemma_args(kernel, alpha, R, x)
    s = check_exponent(s, "s")
    n = kernel.n
    t = float(np.linalg.norm(x)) / R
    if t == 0:
        return 0.0
    modulus = 0.0 if kernel.n == 1 else _log_integral(kernel, s, t / 2, t)
    return R ** (n / s - (n - alpha)) * (t + modulus)
