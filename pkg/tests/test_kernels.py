import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sci

from morreylab import (DomainError, HomogeneousKernel, dini_integral, dini_profile, kernel_eval,
                       lemma_difference_lhs, lemma_difference_rhs, modulus_of_continuity,
                       sphere_norm)

COS1 = HomogeneousKernel.cos_harmonic(1)


def _jump_kernel(samples=16384):
    th = 2 * math.pi * np.arange(samples) / samples
    return HomogeneousKernel.tabulated(th, np.where(th < math.pi, 1.0, -1.0))


def test_kernel_eval_examples():
    assert kernel_eval(HomogeneousKernel.constant(1.0), [0.3, -2.0]) == 1.0
    assert kernel_eval(COS1, [0.0, 3.0]) == pytest.approx(0.0, abs=1e-15)
    assert kernel_eval(HomogeneousKernel.two_values(1.0, -1.0), -2.0) == -1.0


@pytest.mark.parametrize("kernel", [HomogeneousKernel.constant(1.0, n=1),
                                    HomogeneousKernel.constant(2.0), COS1])
def test_kernel_eval_at_origin_raises(kernel):
    with pytest.raises(DomainError):
        kernel_eval(kernel, np.zeros(kernel.n) if kernel.n == 2 else 0.0)


@settings(max_examples=80, deadline=None)
@given(x=st.floats(-50, 50), y=st.floats(-50, 50), lam=st.floats(1e-3, 1e3),
       form=st.sampled_from(["cos", "sin3", "tab"]))
def test_degree_zero_homogeneity(x, y, lam, form):
    if math.hypot(x, y) < 1e-6:
        return
    k = {"cos": COS1, "sin3": HomogeneousKernel.sin_harmonic(3), "tab": _jump_kernel(64)}[form]
    p = np.array([x, y])
    assert kernel_eval(k, lam * p) == pytest.approx(kernel_eval(k, p), abs=1e-12)


def test_tabulated_validation():
    with pytest.raises(DomainError):
        HomogeneousKernel.tabulated([0.0, 1.0, 2.0], [1.0, 2.0, 3.0])
    th = np.linspace(0, 6, 8)
    with pytest.raises(DomainError):
        HomogeneousKernel.tabulated(th[::-1], np.ones(8))


def test_tabulated_is_periodic():
    th = 2 * math.pi * np.arange(16) / 16
    k = HomogeneousKernel.tabulated(th, np.cos(th))
    assert k.on_circle(2 * math.pi - 1e-12) == pytest.approx(k.on_circle(0.0), abs=1e-9)


def test_sphere_norm_trivial_values():
    one = HomogeneousKernel.constant(1.0)
    assert sphere_norm(one, 1) == pytest.approx(2 * math.pi, rel=1e-12)
    assert sphere_norm(one, 2) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)


def test_sphere_norm_cos_against_independent_quadrature():
    oracle = math.sqrt(sci.quad(lambda t: math.cos(t) ** 2, 0, 2 * math.pi)[0])
    assert sphere_norm(COS1, 2) == pytest.approx(oracle, rel=1e-9)
    assert oracle == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_sphere_norm_on_line_is_counting_measure():
    k = HomogeneousKernel.two_values(3.0, -4.0)
    assert sphere_norm(k, 2) == pytest.approx(5.0)


def _brute_modulus_inf(delta, n_theta=4096, n_phi=4001):
    """sup over |rho| < delta, theta of |cos(theta + phi) - cos theta|."""
    phi_max = 2 * math.asin(delta / 2)
    th = np.linspace(0, 2 * math.pi, n_theta, endpoint=False)
    phis = np.linspace(-phi_max, phi_max, n_phi)[1:-1]
    return max(np.max(np.abs(np.cos(th + p) - np.cos(th))) for p in phis[::50])


def test_modulus_matches_brute_force():
    oracle = _brute_modulus_inf(0.1)
    assert modulus_of_continuity(COS1, math.inf, 0.1) == pytest.approx(oracle, rel=2e-2)
    assert modulus_of_continuity(COS1, math.inf, 0.1) == pytest.approx(0.1, rel=2e-2)


def test_modulus_lipschitz_slope():
    assert modulus_of_continuity(COS1, math.inf, 1e-3) / 1e-3 == pytest.approx(1.0, rel=1e-2)


def test_modulus_constant_kernel_is_zero():
    assert modulus_of_continuity(HomogeneousKernel.constant(3.0), 2, 0.5) == 0.0


def test_modulus_rejects_bad_delta():
    with pytest.raises(DomainError):
        modulus_of_continuity(COS1, 2, 0.0)
    with pytest.raises(DomainError):
        modulus_of_continuity(COS1, 2, 2.5)


@pytest.mark.parametrize("s", [1, 2, math.inf])
def test_modulus_nonnegative_and_monotone(s):
    d = np.geomspace(1e-6, 2, 300)
    om = modulus_of_continuity(COS1, s, d)
    assert np.all(om >= 0)
    assert np.all(np.diff(om) >= 0)


def test_dini_constant_kernel_is_zero():
    assert dini_integral(HomogeneousKernel.constant(1.0), 2, 1e-3) == 0.0


def test_dini_cos_against_lipschitz_oracle():
    # omega_inf(d) = d gives int_{dmin}^1 d dd/d = 1 - dmin
    assert dini_integral(COS1, math.inf, 1e-3) == pytest.approx(1 - 1e-3, rel=5e-2)
    assert not dini_profile(COS1, math.inf, 1e-3).divergent


def test_dini_jump_kernel_sup_modulus_does_not_decay():
    prof = dini_profile(_jump_kernel(), math.inf, 1e-3)
    assert prof.last_decade_increment > 0.5 * prof.previous_decade_increment
    assert prof.divergent


def test_dini_jump_kernel_l2_modulus_decays_like_sqrt():
    # omega_2(d) ~ c d^{1/2} for a jump: increments shrink by 10^{-1/2} per decade
    prof = dini_profile(_jump_kernel(), 2, 1e-3)
    ratio = prof.last_decade_increment / prof.previous_decade_increment
    assert ratio == pytest.approx(10 ** -0.5, rel=0.1)
    assert not prof.divergent


def test_kernel_difference_lhs_zero_at_origin():
    assert lemma_difference_lhs(COS1, 1.0, 2, 1.0, [0.0, 0.0]) == 0.0
    assert lemma_difference_rhs(COS1, 2, 1.0, 1.0, [0.0, 0.0]) == 0.0


def test_kernel_difference_requires_small_x():
    with pytest.raises(DomainError):
        lemma_difference_lhs(COS1, 1.0, 2, 1.0, [0.6, 0.0])


def _cartesian_lhs(x, s=2, R=1.0, n_cells=2000):
    """Independent 2D midpoint quadrature on a square covering the annulus."""
    h = 4 * R / n_cells
    ax = -2 * R + (np.arange(n_cells) + 0.5) * h
    total = 0.0
    for row in np.array_split(np.arange(n_cells), 20):
        zx, zy = np.meshgrid(ax[row], ax, indexing="ij")
        r = np.hypot(zx, zy)
        mask = (r >= R) & (r < 2 * R)
        d = np.abs(1 / np.hypot(zx - x[0], zy - x[1]) - 1 / r)
        total += math.fsum((d[mask] ** s).tolist())
    return (total * h * h) ** (1 / s)


def test_kernel_difference_lhs_cartesian_cross_check():
    one = HomogeneousKernel.constant(1.0)
    x = np.array([0.1, 0.0])
    assert lemma_difference_lhs(one, 1.0, 2, 1.0, x) == pytest.approx(_cartesian_lhs(x), rel=2e-2)


@pytest.mark.parametrize("s", [2, 4])
def test_kernel_difference_lhs_scaling(s):
    x0 = np.array([0.05, 0.08])
    lhs1 = lemma_difference_lhs(COS1, 1.0, s, 1.0, x0)
    lhs2 = lemma_difference_lhs(COS1, 1.0, s, 2.0, 2 * x0)
    assert lhs2 / lhs1 == pytest.approx(2 ** (2 / s - 1), rel=1e-2)


def test_kernel_difference_rhs_constant_kernel():
    one = HomogeneousKernel.constant(1.0)
    x = np.array([0.3, 0.4])
    assert lemma_difference_rhs(one, 2, 1.0, 4.0, x) == pytest.approx(4 ** (1 - 1) * 0.5 / 4)


def test_kernel_difference_rhs_cos_golden():
    # omega_inf(d) = d gives |x|/R + |x|/(2R) = 0.15; frozen value of the quadrature
    val = lemma_difference_rhs(COS1, math.inf, 1.0, 1.0, [0.1, 0.0])
    assert val == pytest.approx(0.15, rel=1e-3)
    assert val == pytest.approx(0.1498853591976654, rel=1e-12)


def test_kernel_serialisation():
    assert COS1.to_dict() == {"n": 2, "form": "cos-harmonic", "k": 1}
    assert HomogeneousKernel.two_values(1.0, -1.0).to_dict()["b"] == -1.0
