"""Input validation helpers and the package exception types."""

import math

import numpy as np


class DomainError(ValueError):
    """A numerical precondition was violated (exponent range, singular point, ...)."""


class ConfigError(ValueError):
    """A configuration document is malformed.

    ``key`` names the offending config entry so callers can report it.
    """

    def __init__(self, message, key=None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key


def check_alpha(alpha, n):
    alpha = float(alpha)
    if not (0.0 < alpha < n):
        raise DomainError(f"alpha must lie in (0, {n}), got {alpha}")
    return alpha


def check_exponent(p, name="p", lower=1.0, allow_inf=True, strict=False):
    """Validate an integrability exponent and return it as a float."""
    p = float(p)
    if math.isnan(p):
        raise DomainError(f"{name} is NaN")
    if math.isinf(p):
        if not allow_inf or p < 0:
            raise DomainError(f"{name} must be finite, got {p}")
        return p
    if p < lower or (strict and p == lower):
        op = ">" if strict else ">="
        raise DomainError(f"{name} must be {op} {lower}, got {p}")
    return p


def check_dimension(n):
    if n not in (1, 2):
        raise DomainError(f"dimension must be 1 or 2, got {n}")
    return int(n)


def check_point(x, n, name="x"):
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (n,):
        raise DomainError(f"{name} must be a point in R^{n}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} has non-finite coordinates")
    return x


def check_positive(value, name):
    value = float(value)
    if not value > 0 or not math.isfinite(value):
        raise DomainError(f"{name} must be positive and finite, got {value}")
    return value
