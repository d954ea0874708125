import json
import math

import numpy as np
import pytest
import sympy as sp

from morreylab import (BallFamily, DomainError, HomogeneousKernel, SampledFunction, TestFamily,
                       Weight, ball_family, centered_grid, gamma_alpha, semigroup_check,
                       unboundedness_probe, verify_theorem1, verify_theorem2, verify_theorem3)
from morreylab.experiments import RatioReport

LADDER = [2.0 ** k for k in range(-3, 4)]
BUMP = {"generator": "gaussian-bump", "center": [0.0], "width": 1.0}


@pytest.fixture(scope="module")
def setting():
    g = centered_grid(64.0, 2048)
    balls = BallFamily(np.zeros((1, 1)), 2.0 ** np.arange(-6, 6.001, 0.25))
    fam = TestFamily("dilation-ladder", {"base": BUMP, "lambdas": LADDER})
    return g, balls, fam


def test_dilation_exponents_balance_symbolically():
    n, alpha, beta, p = sp.symbols("n alpha beta p", positive=True)
    q = 1 / (1 / p - alpha / n)
    kappa = p / q
    # ||f(l.)||^p in L^{p,kappa}(w^p, w^q) scales as l^{-(n + beta p) + kappa (n + beta q)};
    # the BMO side is dilation invariant after T f(l.) = l^{-alpha} (T f)(l.)
    lhs = -alpha * p
    rhs = -(n + beta * p) + kappa * (n + beta * q)
    assert sp.simplify(lhs - rhs) == 0


def test_family_members_and_support():
    g = centered_grid(8.0, 256)
    fam = TestFamily("translation-ladder", {"base": {"generator": "tent", "radius": 1.0},
                                            "shifts": [[-2.0], [0.0], [3.0]]})
    members = fam.sample(g)
    assert [lam for lam, _ in members] == [2.0, 0.0, 3.0]
    for (_, f), s in zip(members, (-2.0, 0.0, 3.0)):
        x = g.axis(0)[f.values > 0]
        assert x.min() > s - 1 and x.max() < s + 1
    bump = TestFamily("gaussian-bump", {"width": 0.5}).sample(g)[0][1]
    assert np.all(bump.values[np.abs(g.axis(0)) >= 3.0] == 0)


def test_unknown_generator():
    with pytest.raises(DomainError):
        TestFamily("sawtooth")


def test_bmo_morrey_ratio_dilation_invariant(setting):
    g, balls, fam = setting
    rep = verify_theorem2(fam, g, balls, 0.5, 1.0, HomogeneousKernel.constant(1.0, n=1),
                          Weight.power(-0.25))
    assert rep.passed
    assert rep.spread <= 1.05 and abs(rep.slope) <= 0.02
    assert rep.params["q"] == 2.0 and rep.params["kappa"] == 0.5


def test_riesz_numerator_differs_by_gamma(setting):
    g, balls, fam = setting
    t = verify_theorem2(fam, g, balls, 0.5, 1.0, HomogeneousKernel.constant(1.0, n=1),
                        Weight.power(-0.25))
    i = verify_theorem2(fam, g, balls, 0.5, 1.0, None, Weight.power(-0.25))
    np.testing.assert_allclose(t.ratios, gamma_alpha(0.5, 1) * i.ratios, rtol=1e-9)


def test_bmo_morrey_ratio_translation_invariant():
    g = centered_grid(32.0, 1024)
    balls = ball_family(g, 0.25, 16, 2 ** 0.5, 8)
    fam = TestFamily("translation-ladder", {"base": BUMP,
                                            "shifts": [[-4.0], [-2.0], [0.0], [2.0], [4.0]]})
    rep = verify_theorem2(fam, g, balls, 0.5, 1.0)
    assert rep.passed and rep.spread <= 1.05 and rep.slope is None


def test_zero_samples_are_skipped(setting):
    g, balls, _ = setting
    fam = TestFamily("dilation-ladder", {"base": dict(BUMP, amplitude=0.0), "lambdas": [1.0, 2.0]})
    rep = verify_theorem2(fam, g, balls, 0.5, 1.0)
    assert len(rep.skipped) == 2 and not rep.samples
    assert not rep.passed and "no admissible samples" in rep.notes


def test_rejects_weight_outside_class(setting):
    g, balls, fam = setting
    with pytest.raises(DomainError):
        verify_theorem2(fam, g, balls, 0.5, 1.0, weight=Weight.power(-0.75))


def test_maximal_linf_ratio_dilation_invariant(setting):
    g, balls, fam = setting
    rep = verify_theorem1(fam, g, balls, 0.5)
    assert rep.passed and rep.spread <= 1.05
    assert rep.params["p"] == 2.0


def test_maximal_linf_ratio_indicator_ladder(setting):
    g, balls, _ = setting
    fam = TestFamily("dilation-ladder", {"base": {"generator": "indicator-ball", "radius": 1.0,
                                                  "oversample": 8}, "lambdas": LADDER})
    rep = verify_theorem1(fam, g, balls, 0.5)
    assert np.all(np.isfinite(rep.ratios)) and rep.spread <= 2


def test_maximal_linf_needs_large_s(setting):
    g, balls, fam = setting
    with pytest.raises(DomainError):
        verify_theorem1(fam, g, balls, 0.5, s=1.5)


def test_maximal_morrey_ratio_dilation_invariant(setting):
    g, balls, fam = setting
    rep = verify_theorem3(fam, g, balls, 0.5, 1.0, weight=Weight.power(-0.25))
    assert rep.passed and rep.spread <= 1.05


def _probe_oracle(k, alpha=0.5):
    """I f_eps(0) = (2/gamma) (log log 2^k - log log 2) on the line."""
    return 2 / gamma_alpha(alpha, 1) * (math.log(k * math.log(2)) - math.log(math.log(2)))


def test_unboundedness_probe_line():
    rep = unboundedness_probe()
    assert rep.passed
    assert np.all(np.diff(rep.ratios) > 0)
    ks = np.arange(4, 13)
    np.testing.assert_allclose(rep.numerators, [_probe_oracle(k) for k in ks], rtol=1e-2)
    assert rep.ratios[4] > rep.ratios[0]      # eps = 2^-8 against 2^-4


def test_unboundedness_norm_increments_follow_closed_form():
    # ||f_eps||_2^2 = 2 (1/log 2 - 1/(k log 2)), increments 2/(log 2 k (k+1))
    rep = unboundedness_probe()
    ks = np.arange(4, 13)
    inc = np.diff(rep.denominators ** 2)
    exact = 2 / (math.log(2) * ks[:-1] * (ks[:-1] + 1))
    # eps = 2^-12 spans only ~8 cells at the default resolution
    np.testing.assert_allclose(inc, exact, rtol=5e-2)
    # the increments shrink by k/(k+2) per halving of eps, never by 2x
    np.testing.assert_allclose(inc[1:] / inc[:-1], ks[:-2] / (ks[:-2] + 2), rtol=5e-2)


def test_unboundedness_probe_plane():
    rep = unboundedness_probe(n=2, alpha=1.0)
    assert np.all(np.diff(rep.ratios) > 0)


def test_unboundedness_rejects_bad_cutoffs():
    with pytest.raises(DomainError):
        unboundedness_probe(cutoffs=[0.7])


def test_semigroup():
    g = centered_grid(2048.0, 8192)
    f = TestFamily("gaussian-bump", {"width": 1.0}).sample(g)[0][1]
    rep = semigroup_check(0.3, 0.4, f)
    assert rep.passed and rep.ratios[0] <= 0.05


def test_semigroup_zero_and_bad_orders():
    g = centered_grid(16.0, 256)
    zero = SampledFunction(g, np.zeros(256))
    assert semigroup_check(0.3, 0.4, zero).ratios[0] == 0.0
    with pytest.raises(DomainError):
        semigroup_check(0.6, 0.5, zero)


def test_report_serialisation():
    rep = RatioReport("demo", {"study": "demo"})
    rep.samples.append({"sample_id": 0, "lambda": 0.5, "numerator": 1.0, "denominator": 3.0,
                        "ratio": 1 / 3})
    doc = json.loads(rep.to_json())
    assert doc["experiment"] == "demo" and doc["samples"][0]["ratio"] == 1 / 3
    lines = rep.to_csv().splitlines()
    assert lines[0] == "sample_id,lambda,numerator,denominator,ratio"
    assert lines[1] == f"0,0.5,1.0,3.0,{1 / 3!r}"
