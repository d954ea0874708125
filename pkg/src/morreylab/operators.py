"""Riesz potentials, homogeneous fractional integrals and fractional maximal functions.

Operators act on :class:`~morreylab.geometry.SampledFunction` and return values
on the same grid. The reference path is direct summation. On a regular grid
the kernel weight between two cells depends only on their index offset, so a
single offset table is built and every output cell reduces its own row of
products in a fixed order.

On the line the offset table holds exact integrals of the kernel over each
cell (f is treated as piecewise constant). In the plane it holds midpoint
values, with the self cell replaced by the exact integral over the disc of
the same area.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ._parallel import map_blocks
from .geometry import SampledFunction
from .kernels import HomogeneousKernel, kernel_eval
from .validation import DomainError, check_alpha, check_point

KINDS = ("riesz", "frac-maximal", "homogeneous-integral", "homogeneous-maximal")


@dataclass(frozen=True)
class OperatorSpec:
    kind: str
    alpha: float
    kernel: HomogeneousKernel = None
    n: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown operator kind {self.kind!r}")
        homogeneous = self.kind.startswith("homogeneous")
        if homogeneous and self.kernel is None:
            raise DomainError(f"{self.kind} needs a kernel")
        if not homogeneous and self.kernel is not None:
            raise DomainError(f"{self.kind} takes no kernel")
        n = self.kernel.n if self.kernel is not None else self.n
        object.__setattr__(self, "n", n)
        check_alpha(self.alpha, n)


def gamma_alpha(alpha, n):
    """2^alpha pi^{n/2} Gamma(alpha/2) / Gamma((n-alpha)/2)."""
    alpha = check_alpha(alpha, n)
    return 2 ** alpha * math.pi ** (n / 2) * math.gamma(alpha / 2) / math.gamma((n - alpha) / 2)


def _unit_kernel(n):
    return HomogeneousKernel.constant(1.0, n=n)


def _check_kernel(f, kernel):
    if kernel.n != f.grid.n:
        raise DomainError(f"kernel dimension {kernel.n} != function dimension {f.grid.n}")


def _offset_table_1d(grid, kernel, alpha):
    """Exact int over a cell of Omega(z)|z|^{alpha-1}, for offsets d = i - j."""
    N = grid.resolution
    h = grid.spacing[0]
    d = np.arange(1, N)
    shell = ((d + 0.5) ** alpha - (d - 0.5) ** alpha) * h ** alpha / alpha
    a = kernel.a if kernel.form == "two-values" else kernel.c
    b = kernel.b if kernel.form == "two-values" else kernel.c
    self_cell = (a + b) * (h / 2) ** alpha / alpha
    # index d + N - 1; positive offsets mean y < x, i.e. z = x - y > 0
    return np.concatenate([b * shell[::-1], [self_cell], a * shell])


def _offsets_2d(grid):
    R = grid.resolution
    h0, h1 = grid.spacing
    d = np.arange(-(R - 1), R)
    zx, zy = np.meshgrid(d * h0, d * h1, indexing="ij")
    return zx, zy


def _offset_table_2d(grid, kernel, alpha):
    R = grid.resolution
    zx, zy = _offsets_2d(grid)
    r = np.hypot(zx, zy)
    r[R - 1, R - 1] = 1.0
    z = np.stack([zx, zy], axis=-1)
    z[R - 1, R - 1] = (1.0, 0.0)
    table = kernel_eval(kernel, z) * r ** (alpha - 2) * grid.cell_volume
    rho = math.sqrt(grid.cell_volume / math.pi)
    table[R - 1, R - 1] = kernel.mean_on_sphere() * 2 * math.pi * rho ** alpha / alpha
    return table


def _apply_offsets(table, values):
    """out[i] = sum_j table[i - j] values[j] with fixed per-row reduction order."""
    if values.ndim == 1:
        N = values.size
        windows = sliding_window_view(table[::-1], N)

        def rows(a, b):
            block = windows[N - b:N - a][::-1]
            return (block * values[None, :]).sum(axis=1)

        return np.concatenate(map_blocks(rows, N))
    R = values.shape[0]
    windows = sliding_window_view(table[::-1, ::-1], (R, R))
    flat = values.ravel()

    def rows2(a, b):
        out = np.empty((b - a, R))
        for i in range(a, b):
            w = windows[R - 1 - i][::-1].reshape(R, R * R)
            out[i - a] = (w * flat[None, :]).sum(axis=1)
        return out

    return np.concatenate(map_blocks(rows2, R, block=4))


def homogeneous_fractional_integral(f, kernel, alpha):
    """T_{Omega,alpha} f(x) = int Omega(x-y) |x-y|^{alpha-n} f(y) dy on the grid."""
    _check_kernel(f, kernel)
    alpha = check_alpha(alpha, f.grid.n)
    if f.grid.n == 1:
        table = _offset_table_1d(f.grid, kernel, alpha)
    else:
        table = _offset_table_2d(f.grid, kernel, alpha)
    return f.with_values(_apply_offsets(table, f.values))


def riesz_potential(f, alpha):
    """I_alpha f = T_{1,alpha} f / gamma(alpha)."""
    alpha = check_alpha(alpha, f.grid.n)
    t = homogeneous_fractional_integral(f, _unit_kernel(f.grid.n), alpha)
    return t.with_values(t.values / gamma_alpha(alpha, f.grid.n))


def _direct_at_index(f, kernel, alpha, index):
    """T_{Omega,alpha} f at one grid cell, same quadrature as the full operator."""
    grid = f.grid
    if grid.n == 1:
        i = index[0]
        table = _offset_table_1d(grid, kernel, alpha)
        N = grid.resolution
        w = table[i - np.arange(N) + N - 1]
        return float(np.sum(w * f.values))
    R = grid.resolution
    table = _offset_table_2d(grid, kernel, alpha)
    i, j = index
    w = table[i - np.arange(R)[:, None] + R - 1, j - np.arange(R)[None, :] + R - 1]
    return float(np.sum(w * f.values))


def riesz_potential_at(f, alpha, point):
    """I_alpha f at a single grid cell centre."""
    alpha = check_alpha(alpha, f.grid.n)
    idx = f.grid.index_of(point)
    return _direct_at_index(f, _unit_kernel(f.grid.n), alpha, idx) / gamma_alpha(alpha, f.grid.n)


def _support_extent(f):
    nz = np.nonzero(f.values)
    if len(nz[0]) == 0:
        return np.zeros(f.grid.n)
    return np.array([(ax.max() - ax.min() + 1) for ax in nz]) * f.grid.spacing


def riesz_fourier_oracle(f, alpha, pad=4):
    """I_alpha f through the multiplier (2 pi |xi|)^{-alpha} on a zero-padded
    periodic extension.

    The multiplier has no value at xi = 0; the free constant is fixed so the
    result matches direct summation at the middle cell of the grid.
    """
    grid = f.grid
    alpha = check_alpha(alpha, grid.n)
    if np.any(_support_extent(f) > grid.box.widths / 4 + 1e-12):
        raise DomainError("support of f is too wide for the padded transform (max box/4)")
    M = pad * grid.resolution
    padded = np.zeros((M,) * grid.n)
    padded[(slice(0, grid.resolution),) * grid.n] = f.values
    freqs = [np.fft.fftfreq(M, d=h) for h in grid.spacing]
    if grid.n == 1:
        xi = np.abs(freqs[0])
    else:
        xi = np.hypot(*np.meshgrid(*freqs, indexing="ij"))
    mult = np.zeros_like(xi)
    nz = xi > 0
    mult[nz] = (2 * math.pi * xi[nz]) ** (-alpha)
    u = np.real(np.fft.ifftn(np.fft.fftn(padded) * mult))
    u = u[(slice(0, grid.resolution),) * grid.n]
    mid = (grid.resolution // 2,) * grid.n
    ref = _direct_at_index(f, _unit_kernel(grid.n), alpha, mid) / gamma_alpha(alpha, grid.n)
    return f.with_values(u + (ref - u[mid]))


def _lattice_count(grid, x, r):
    """Number of (infinite) lattice cell centres within distance r of x."""
    counts = []
    for k in range(grid.n):
        h = grid.spacing[k]
        lo = grid.box.lo[k]
        t0 = math.floor((x[k] - r - lo) / h - 0.5) - 1
        t1 = math.ceil((x[k] + r - lo) / h - 0.5) + 1
        counts.append(lo + (np.arange(t0, t1 + 1) + 0.5) * h - x[k])
    if grid.n == 1:
        return int(np.sum(np.abs(counts[0]) < r))
    d2 = counts[0][:, None] ** 2 + counts[1][None, :] ** 2
    return int(np.sum(d2 < r * r))


def homogeneous_fractional_maximal(f, kernel, alpha, x, radii):
    """max over r in ``radii`` of |B(x,r)|^{alpha/n-1} int_{B(x,r)} |Omega(x-y)||f(y)| dy.

    |B| is the quadrature volume of the ball (number of lattice cells inside
    times the cell volume); the self cell uses the sphere mean of |Omega|.
    """
    _check_kernel(f, kernel)
    grid = f.grid
    n = grid.n
    alpha = check_alpha(alpha, n)
    x = check_point(x, n)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if radii.size == 0:
        raise DomainError("empty radius ladder")
    pts = grid.points()
    z = x[None, :] - pts
    dist = np.linalg.norm(z, axis=1)
    absf = np.abs(f.values).ravel()
    at_x = dist == 0
    om = np.empty(dist.size)
    om[~at_x] = np.abs(kernel_eval(kernel, z[~at_x] if n == 2 else z[~at_x, 0]))
    om[at_x] = kernel.mean_on_sphere(absolute=True)
    contrib = om * absf
    vol = grid.cell_volume
    best = 0.0
    for r in radii:
        count = _lattice_count(grid, x, r)
        if count == 0:
            continue
        mass = math.fsum(contrib[dist < r].tolist()) * vol
        best = max(best, (count * vol) ** (alpha / n - 1) * mass)
    return best


def fractional_maximal(f, alpha, x, radii):
    return homogeneous_fractional_maximal(f, _unit_kernel(f.grid.n), alpha, x, radii)


def maximal_on_grid(f, alpha, radii, kernel=None):
    """M_{Omega,alpha} f at every grid cell (Omega = 1 when ``kernel`` is None)."""
    grid = f.grid
    n = grid.n
    alpha = check_alpha(alpha, n)
    kernel = kernel or _unit_kernel(n)
    _check_kernel(f, kernel)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    if radii.size == 0:
        raise DomainError("empty radius ladder")
    absf = np.abs(f.values)
    vol = grid.cell_volume
    best = np.zeros(grid.shape)
    if n == 1:
        N = grid.resolution
        h = grid.spacing[0]
        a = abs(kernel.a if kernel.form == "two-values" else kernel.c)
        b = abs(kernel.b if kernel.form == "two-values" else kernel.c)
        centre = kernel.mean_on_sphere(absolute=True)
        prefix = np.concatenate([[0.0], np.cumsum(absf)])
        idx = np.arange(N)
        for r in radii:
            m = int(math.ceil(r / h)) - 1
            if m < 0:
                continue
            left = prefix[idx] - prefix[np.maximum(idx - m, 0)]
            right = prefix[np.minimum(idx + m + 1, N)] - prefix[idx + 1]
            mass = (a * left + b * right + centre * absf) * vol
            best = np.maximum(best, ((2 * m + 1) * vol) ** (alpha - 1) * mass)
        return f.with_values(best)
    R = grid.resolution
    zx, zy = _offsets_2d(grid)
    dist = np.hypot(zx, zy)
    z = np.stack([zx, zy], axis=-1)
    z[R - 1, R - 1] = (1.0, 0.0)
    om = np.abs(kernel_eval(kernel, z))
    om[R - 1, R - 1] = kernel.mean_on_sphere(absolute=True)
    for r in radii:
        inside = dist < r
        count = _lattice_count(grid, np.zeros(2) + grid.points()[0], r)
        if count == 0:
            continue
        mass = _apply_offsets(np.where(inside, om, 0.0) * vol, absf)
        best = np.maximum(best, (count * vol) ** (alpha / n - 1) * mass)
    return f.with_values(best)
