"""Fractional integrals and maximal operators with homogeneous kernels on
weighted Morrey spaces: discretised operators, weight classes, norms and
ratio studies."""

__version__ = "0.1.0"

from .validation import ConfigError, DomainError
from .geometry import (Ball, BallFamily, Box, Grid, SampledFunction, ball_family,
                       centered_grid, integrate, make_grid, radius_ladder)
from .kernels import (HomogeneousKernel, dini_integral, dini_profile, kernel_eval,
                      lemma_difference_lhs, lemma_difference_rhs, modulus_of_continuity,
                      sphere_norm)
from .weights import (ApqReport, Weight, apq_constant, conjugate_exponent, ess_sup,
                      exponent_identities, w_measure)
from .operators import (OperatorSpec, fractional_maximal, gamma_alpha,
                        homogeneous_fractional_integral, homogeneous_fractional_maximal,
                        maximal_on_grid, riesz_fourier_oracle, riesz_potential,
                        riesz_potential_at)
from .spaces import (bmo_seminorm, lp_norm, morrey_norm, weak_lp_norm, weighted_bmo_norm,
                     weighted_linf_norm)
from .experiments import (RatioReport, TestFamily, semigroup_check, unboundedness_probe,
                          verify_theorem1, verify_theorem2, verify_theorem3)
