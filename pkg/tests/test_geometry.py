import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from morreylab import (Ball, BallFamily, Box, DomainError, SampledFunction, ball_family,
                       centered_grid, integrate, make_grid, radius_ladder)
from morreylab.geometry import ball_cell_count, ball_values, exact_sum


def test_grid_spacing_and_centres():
    g = make_grid(Box((-1.0,), (1.0,)), 4)
    assert g.spacing[0] == 0.5
    np.testing.assert_allclose(g.axis(0), [-0.75, -0.25, 0.25, 0.75])


def test_grid_2d_cell_count():
    g = make_grid(Box((0.0, 0.0), (1.0, 1.0)), 3)
    assert g.size == 9
    np.testing.assert_allclose(g.spacing, [1 / 3, 1 / 3])
    assert g.points().shape == (9, 2)


@pytest.mark.parametrize("res", [1, 0, 2.5])
def test_bad_resolution(res):
    with pytest.raises(DomainError):
        make_grid(Box((-1.0,), (1.0,)), res)


def test_degenerate_box():
    with pytest.raises(DomainError):
        Box((1.0,), (1.0,))
    with pytest.raises(DomainError):
        Box((0.0, 0.0), (1.0,))


@pytest.mark.parametrize("res", [7, 8, 2048])
def test_centered_grid_has_origin_cell(res):
    g = centered_grid(3.0, res)
    assert g.index_of(np.zeros(1)) == (res // 2,)


def test_sampled_function_outside_box_is_zero():
    g = make_grid(Box((-1.0,), (1.0,)), 16)
    f = SampledFunction(g, np.ones(16))
    np.testing.assert_array_equal(f(np.array([[-3.0], [0.1], [5.0]])), [0.0, 1.0, 0.0])


def test_sampled_function_rejects_nonfinite():
    g = make_grid(Box((-1.0,), (1.0,)), 4)
    with pytest.raises(DomainError):
        SampledFunction(g, [0.0, np.nan, 1.0, 2.0])
    with pytest.raises(DomainError):
        SampledFunction(g, [0.0, 1.0])


def test_sampled_values_read_only():
    g = make_grid(Box((-1.0,), (1.0,)), 4)
    f = SampledFunction(g, np.arange(4.0))
    with pytest.raises(ValueError):
        f.values[0] = 7.0


def test_oversampled_indicator_mass_is_exact():
    g = make_grid(Box((-2.0,), (2.0,)), 10)   # edges of [-1,1] fall mid-cell
    f = SampledFunction.from_callable(lambda x: (np.abs(x[:, 0]) <= 1).astype(float), g,
                                      oversample=4)
    assert integrate(f, Box((-2.0,), (2.0,))) == pytest.approx(2.0, abs=1e-12)


def test_integrate_interval_length():
    g = make_grid(Box((-1.0,), (1.0,)), 1000)
    f = SampledFunction(g, np.ones(g.size))
    assert abs(integrate(f, Ball([0.0], 0.5)) - 1.0) <= g.cell_volume


def test_integrate_unit_disc():
    g = make_grid(Box((-1.0, -1.0), (1.0, 1.0)), 256)
    f = SampledFunction(g, np.ones(g.size))
    assert integrate(f, Ball([0.0, 0.0], 1.0)) == pytest.approx(math.pi, rel=1e-2)


def test_integrate_disjoint_region():
    g = make_grid(Box((-1.0,), (1.0,)), 64)
    f = SampledFunction(g, np.ones(g.size))
    assert integrate(f, Ball([5.0], 1.0)) == 0.0
    assert integrate(f, Box((2.0,), (3.0,))) == 0.0


def test_radius_ladder():
    np.testing.assert_allclose(radius_ladder(0.1, 0.8, 2), [0.1, 0.2, 0.4, 0.8])
    with pytest.raises(DomainError):
        radius_ladder(0.1, 0.8, 1.0)
    with pytest.raises(DomainError):
        radius_ladder(1.0, 0.5, 2.0)


def test_single_centre_family():
    g = make_grid(Box((-1.0,), (1.0,)), 8)
    fam = ball_family(g, 0.1, 0.8, 2, center_stride=8)
    np.testing.assert_allclose(fam.centers, [[g.axis(0)[4]]])


def test_family_extra_centres_deduplicated():
    g = centered_grid(1.0, 9)
    fam = ball_family(g, 0.1, 0.8, 2, center_stride=3, extra_centers=[[0.0], [0.123]])
    assert sorted(fam.centers[:, 0].tolist()).count(0.0) == 1
    assert 0.123 in fam.centers[:, 0]
    assert len(fam) == len(fam.centers) * len(fam.radii)


def test_family_validation():
    with pytest.raises(DomainError):
        BallFamily(np.zeros((0, 1)), np.array([1.0]))
    with pytest.raises(DomainError):
        BallFamily(np.zeros((1, 1)), np.array([1.0, 1.0]))
    with pytest.raises(DomainError):
        Ball([0.0], 0.0)


def test_ball_volume():
    assert Ball([0.0], 2.0).volume == 4.0
    assert Ball([0.0, 0.0], 2.0).volume == pytest.approx(4 * math.pi)


def test_exact_sum_is_order_free():
    vals = np.array([1e16, 1.0, -1e16, 1.0])
    assert exact_sum(vals) == exact_sum(vals[::-1]) == 2.0


@settings(max_examples=60, deadline=None)
@given(c=st.floats(-3, 3), r=st.floats(0.01, 4), n=st.sampled_from([1, 2]))
def test_ball_cells_are_exactly_the_centres_inside(c, r, n):
    g = make_grid(Box((-2.0,) * n, (2.0,) * n), 24)
    centre = np.full(n, c)
    pts = g.points()
    brute = int(np.sum(np.linalg.norm(pts - centre, axis=1) < r))
    assert ball_cell_count(g, Ball(centre, r)) == brute


@settings(max_examples=40, deadline=None)
@given(a=st.floats(-5, 5), b=st.floats(-5, 5), r=st.floats(0.05, 3))
def test_integrate_is_linear(a, b, r):
    g = make_grid(Box((-2.0,), (2.0,)), 64)
    x = g.axis(0)
    f = SampledFunction(g, np.sin(x))
    h = SampledFunction(g, x ** 2)
    ball = Ball([0.3], r)
    lhs = integrate(f * a + h * b, ball)
    rhs = a * integrate(f, ball) + b * integrate(h, ball)
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_ball_values_row_major_2d():
    g = make_grid(Box((-1.0, -1.0), (1.0, 1.0)), 4)
    vals = np.arange(16.0).reshape(4, 4)
    got = ball_values(vals, g, Ball([0.0, 0.0], 0.5))
    np.testing.assert_array_equal(got, [5.0, 6.0, 9.0, 10.0])
