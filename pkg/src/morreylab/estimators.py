"""Transformer wrappers so the grid operators compose with sklearn pipelines.

Each row of ``X`` holds the samples of one function on ``grid`` in row-major
order; ``transform`` returns the operator output sampled on the same grid.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .geometry import Grid, SampledFunction
from .operators import homogeneous_fractional_integral, maximal_on_grid, riesz_potential
from .validation import DomainError, check_alpha


class _GridOperator(TransformerMixin, BaseEstimator):

    def _validate(self, X, reset):
        X = check_array(X, dtype=np.float64, ensure_all_finite=True)
        if not isinstance(self.grid, Grid):
            raise DomainError("grid must be a Grid")
        if X.shape[1] != self.grid.size:
            raise DomainError(f"expected {self.grid.size} features (one per grid cell), "
                              f"got {X.shape[1]}")
        if reset:
            self.n_features_in_ = X.shape[1]
        return X

    def fit(self, X, y=None):
        self._validate(X, reset=True)
        check_alpha(self.alpha, self.grid.n)
        self.grid_ = self.grid
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = self._validate(X, reset=False)
        rows = [self._apply(SampledFunction(self.grid_, row)).values.ravel() for row in X]
        return np.vstack(rows)


class RieszPotential(_GridOperator):
    """I_alpha applied row-wise."""

    def __init__(self, alpha=0.5, grid=None):
        self.alpha = alpha
        self.grid = grid

    def _apply(self, f):
        return riesz_potential(f, self.alpha)


class HomogeneousFractionalIntegral(_GridOperator):
    """T_{Omega,alpha} applied row-wise."""

    def __init__(self, kernel=None, alpha=0.5, grid=None):
        self.kernel = kernel
        self.alpha = alpha
        self.grid = grid

    def fit(self, X, y=None):
        if self.kernel is None:
            raise DomainError("kernel is required")
        return super().fit(X, y)

    def _apply(self, f):
        return homogeneous_fractional_integral(f, self.kernel, self.alpha)


class FractionalMaximal(_GridOperator):
    """M_{Omega,alpha} over a radius ladder, applied row-wise (Omega = 1 by default)."""

    def __init__(self, alpha=0.5, radii=None, kernel=None, grid=None):
        self.alpha = alpha
        self.radii = radii
        self.kernel = kernel
        self.grid = grid

    def fit(self, X, y=None):
        if self.radii is None or len(self.radii) == 0:
            raise DomainError("radii are required")
        return super().fit(X, y)

    def _apply(self, f):
        return maximal_on_grid(f, self.alpha, self.radii, self.kernel)
