"""Grids, balls and sampled functions on boxes in R^1 and R^2.

All quadrature here is the cell-centred midpoint rule: a cell belongs to a
region when its centre does, and sums are exactly rounded (``math.fsum``) so
they do not depend on evaluation order.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .validation import DomainError, check_dimension, check_point, check_positive


@dataclass(frozen=True)
class Box:
    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lo))
        hi = tuple(float(v) for v in np.atleast_1d(self.hi))
        if len(lo) != len(hi):
            raise DomainError("box corners have different dimensions")
        check_dimension(len(lo))
        if any(a >= b for a, b in zip(lo, hi)):
            raise DomainError(f"degenerate box: lo={lo} must be < hi={hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def n(self):
        return len(self.lo)

    @property
    def center(self):
        return np.array([(a + b) / 2 for a, b in zip(self.lo, self.hi)])

    @property
    def widths(self):
        return np.array([b - a for a, b in zip(self.lo, self.hi)])


@dataclass(frozen=True)
class Grid:
    """Cell-centred regular grid; ``resolution`` cells per axis."""

    box: Box
    resolution: int

    @property
    def n(self):
        return self.box.n

    @property
    def spacing(self):
        return self.box.widths / self.resolution

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    @property
    def shape(self):
        return (self.resolution,) * self.n

    @property
    def size(self):
        return self.resolution ** self.n

    def axis(self, k=0):
        lo = self.box.lo[k]
        h = self.spacing[k]
        return lo + (np.arange(self.resolution) + 0.5) * h

    def points(self):
        """Cell centres, shape ``(size, n)``, row-major order."""
        if self.n == 1:
            return self.axis(0)[:, None]
        xx, yy = np.meshgrid(self.axis(0), self.axis(1), indexing="ij")
        return np.column_stack([xx.ravel(), yy.ravel()])

    def index_of(self, x):
        """Index of the cell whose centre coincides with ``x`` (to rounding)."""
        x = check_point(x, self.n)
        idx = []
        for k in range(self.n):
            t = (x[k] - self.box.lo[k]) / self.spacing[k] - 0.5
            i = int(round(t))
            if abs(t - i) > 1e-6 or not 0 <= i < self.resolution:
                raise DomainError(f"point {x.tolist()} is not a cell centre of the grid")
            idx.append(i)
        return tuple(idx)


def make_grid(box, resolution):
    if isinstance(resolution, bool) or int(resolution) != resolution:
        raise DomainError(f"resolution must be an integer, got {resolution}")
    resolution = int(resolution)
    if resolution < 2:
        raise DomainError(f"resolution must be >= 2, got {resolution}")
    if not isinstance(box, Box):
        box = Box(*box)
    return Grid(box, resolution)


def centered_grid(half_width, resolution, n=1):
    """Grid of ``resolution`` cells of width ``2*half_width/resolution`` with a
    cell centre at the origin (shifted by half a cell when ``resolution`` is even)."""
    h = 2.0 * half_width / resolution
    shift = 0.0 if resolution % 2 else h / 2
    lo = (-half_width - shift,) * n
    hi = (half_width - shift,) * n
    return make_grid(Box(lo, hi), resolution)


@dataclass(frozen=True)
class SampledFunction:
    """Values at the cell centres of ``grid``; zero outside the box."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.size != self.grid.size:
            raise DomainError(f"expected {self.grid.size} values, got {v.size}")
        v = v.reshape(self.grid.shape)
        if not np.all(np.isfinite(v)):
            raise DomainError("sampled values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, func, grid, oversample=1):
        """Sample ``func(points)`` at cell centres.

        With ``oversample > 1`` each cell value is the mean over an
        ``oversample**n`` sub-grid, which gives exact masses for indicators
        whose edges fall on sub-cell boundaries.
        """
        if oversample == 1:
            return cls(grid, np.asarray(func(grid.points()), dtype=float))
        m = int(oversample)
        offs = (np.arange(m) + 0.5) / m - 0.5
        pts = grid.points()
        h = grid.spacing
        acc = np.zeros(len(pts))
        if grid.n == 1:
            for o in offs:
                acc += func(pts + o * h)
            acc /= m
        else:
            for o0 in offs:
                for o1 in offs:
                    acc += func(pts + np.array([o0, o1]) * h)
            acc /= m * m
        return cls(grid, acc)

    def __call__(self, x):
        """Nearest-cell evaluation; 0 outside the box."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.grid.n == 1 and x.shape[0] == 1 and x.shape[1] != 1:
            x = x.T
        out = np.zeros(len(x))
        lo = np.array(self.grid.box.lo)
        idx = np.floor((x - lo) / self.grid.spacing).astype(int)
        inside = np.all((idx >= 0) & (idx < self.grid.resolution), axis=1)
        if np.any(inside):
            out[inside] = self.values[tuple(idx[inside].T)]
        return out

    def with_values(self, values):
        return SampledFunction(self.grid, values)

    def __add__(self, other):
        _check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __mul__(self, c):
        return self.with_values(self.values * float(c))

    __rmul__ = __mul__


def _check_same_grid(f, g):
    if f.grid != g.grid:
        raise DomainError("sampled functions live on different grids")


@dataclass(frozen=True)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        check_dimension(c.size)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", check_positive(self.radius, "radius"))

    @property
    def n(self):
        return self.center.size

    @property
    def volume(self):
        r = self.radius
        return 2 * r if self.n == 1 else math.pi * r * r


@dataclass(frozen=True)
class BallFamily:
    """Every (centre, radius) pair of ``centers`` x ``radii``."""

    centers: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=float)
        if c.ndim == 1:
            c = c[:, None]
        r = np.asarray(self.radii, dtype=float)
        if len(c) == 0 or len(r) == 0:
            raise DomainError("ball family is empty")
        if np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise DomainError("radii must be positive and strictly increasing")
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)

    def __len__(self):
        return len(self.centers) * len(self.radii)

    def __iter__(self):
        for c in self.centers:
            for r in self.radii:
                yield Ball(c, r)

    def with_radii(self, radii):
        return BallFamily(self.centers, radii)


def radius_ladder(r_min, r_max, growth):
    r_min = check_positive(r_min, "r_min")
    if not r_max > r_min:
        raise DomainError(f"r_max must exceed r_min, got {r_min}, {r_max}")
    if not growth > 1:
        raise DomainError(f"growth must be > 1, got {growth}")
    k = int(math.floor(math.log(r_max / r_min) / math.log(growth) + 1e-9))
    radii = r_min * growth ** np.arange(k + 1)
    if len(radii) == 0:
        raise DomainError("empty radius ladder")
    return radii


def ball_family(box_or_grid, r_min, r_max, growth, center_stride, resolution=None,
                extra_centers=()):
    """Ball family over grid centres taken every ``center_stride`` cells.

    ``extra_centers`` are appended (duplicates dropped); the origin is the
    usual addition since power weights are singular there.
    """
    if isinstance(box_or_grid, Grid):
        grid = box_or_grid
    else:
        if resolution is None:
            raise DomainError("a resolution is required when passing a Box")
        grid = make_grid(box_or_grid, resolution)
    stride = int(center_stride)
    if stride < 1:
        raise DomainError(f"center stride must be >= 1, got {center_stride}")
    radii = radius_ladder(r_min, r_max, growth)
    axes = []
    for k in range(grid.n):
        ax = grid.axis(k)
        if stride >= grid.resolution:
            ax = ax[[grid.resolution // 2]]
        else:
            start = (grid.resolution // 2) % stride
            ax = ax[start::stride]
        axes.append(ax)
    if grid.n == 1:
        centers = axes[0][:, None]
    else:
        xx, yy = np.meshgrid(*axes, indexing="ij")
        centers = np.column_stack([xx.ravel(), yy.ravel()])
    extra = np.asarray(extra_centers, dtype=float).reshape(-1, grid.n)
    if len(extra):
        keep = [e for e in extra if not np.any(np.all(np.isclose(centers, e, atol=0, rtol=0), axis=1))]
        if keep:
            centers = np.vstack([centers, np.array(keep)])
    return BallFamily(centers, radii)


def _ball_cells(grid, ball):
    """Index expression selecting the cells whose centres lie in the open ball."""
    if ball.n != grid.n:
        raise DomainError("ball and grid dimensions differ")
    c, r = ball.center, ball.radius
    if grid.n == 1:
        ax_lo, h = grid.box.lo[0], grid.spacing[0]
        # centres x_i = lo + (i + 1/2) h with |x_i - c| < r
        i0 = max(0, int(math.floor((c[0] - r - ax_lo) / h - 0.5)) - 1)
        i1 = min(grid.resolution, int(math.ceil((c[0] + r - ax_lo) / h - 0.5)) + 2)
        if i0 >= i1:
            return (slice(0, 0),)
        xs = grid.axis(0)[i0:i1]
        inside = np.nonzero(np.abs(xs - c[0]) < r)[0]
        if len(inside) == 0:
            return (slice(0, 0),)
        return (slice(i0 + inside[0], i0 + inside[-1] + 1),)
    h0, h1 = grid.spacing
    lo0, lo1 = grid.box.lo
    i0 = max(0, int(math.floor((c[0] - r - lo0) / h0 - 0.5)) - 1)
    i1 = min(grid.resolution, int(math.ceil((c[0] + r - lo0) / h0 - 0.5)) + 2)
    j0 = max(0, int(math.floor((c[1] - r - lo1) / h1 - 0.5)) - 1)
    j1 = min(grid.resolution, int(math.ceil((c[1] + r - lo1) / h1 - 0.5)) + 2)
    if i0 >= i1 or j0 >= j1:
        return (np.array([], dtype=int), np.array([], dtype=int))
    xs = grid.axis(0)[i0:i1]
    ys = grid.axis(1)[j0:j1]
    d2 = (xs[:, None] - c[0]) ** 2 + (ys[None, :] - c[1]) ** 2
    ii, jj = np.nonzero(d2 < r * r)
    return (ii + i0, jj + j0)


def ball_values(values, grid, ball):
    """Flat array of ``values`` on the cells inside ``ball`` (row-major order)."""
    return np.asarray(values)[_ball_cells(grid, ball)].ravel()


def ball_cell_count(grid, ball):
    return ball_values(np.empty(grid.shape), grid, ball).size


def box_cells(grid, box):
    masks = []
    for k in range(grid.n):
        ax = grid.axis(k)
        masks.append((ax >= box.lo[k]) & (ax < box.hi[k]))
    if grid.n == 1:
        return (masks[0],)
    return np.ix_(masks[0], masks[1])


def exact_sum(values):
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def integrate(f, region):
    """Midpoint quadrature of ``f`` over a Ball or Box.

    Cells count when their centre lies in the region; the sum is exactly
    rounded, hence independent of ordering and parallelism.
    """
    grid = f.grid
    if isinstance(region, Ball):
        vals = ball_values(f.values, grid, region)
    elif isinstance(region, Box):
        if region.n != grid.n:
            raise DomainError("region and grid dimensions differ")
        vals = f.values[box_cells(grid, region)]
    else:
        raise TypeError(f"region must be a Ball or Box, got {type(region).__name__}")
    if vals.size == 0:
        return 0.0
    return exact_sum(vals) * grid.cell_volume
