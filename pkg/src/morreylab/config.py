"""JSON config documents -> library objects.

Every parser raises :class:`ConfigError` carrying the dotted key of the
offending entry.
"""

import json
import math

import numpy as np

from .experiments import TestFamily
from .geometry import Box, BallFamily, SampledFunction, ball_family, centered_grid, make_grid, radius_ladder
from .kernels import HomogeneousKernel
from .operators import KINDS, OperatorSpec
from .validation import ConfigError, DomainError
from .weights import Weight


def load(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON ({exc})", key="<document>") from exc
    except OSError as exc:
        raise ConfigError(f"cannot read config ({exc})", key="--config") from exc
    if not isinstance(doc, dict):
        raise ConfigError("top level must be an object", key="<document>")
    return doc


def _get(d, name, key, default=None, required=True):
    if not isinstance(d, dict):
        raise ConfigError("expected an object", key=key)
    if name in d:
        return d[name]
    if required and default is None:
        raise ConfigError("missing entry", key=f"{key}.{name}" if key else name)
    return default


def exponent(value, key):
    if isinstance(value, str) and value.lower() in ("inf", "infinity"):
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number or 'inf', got {value!r}", key=key)
    return float(value)


def number(value, key):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", key=key)
    return float(value)


def kernel(d, key="kernel", n=None):
    form = _get(d, "form", key)
    dim = int(_get(d, "n", key, default=n or (1 if form == "two-values" else 2)))
    try:
        if form == "constant":
            return HomogeneousKernel.constant(number(d.get("c", 1.0), f"{key}.c"), n=dim)
        if form == "two-values":
            return HomogeneousKernel.two_values(number(_get(d, "a", key), f"{key}.a"),
                                                number(_get(d, "b", key), f"{key}.b"))
        if form in ("cos-harmonic", "sin-harmonic"):
            return HomogeneousKernel(n=dim, form=form, k=int(d.get("k", 1)))
        if form == "tabulated":
            return HomogeneousKernel.tabulated(_get(d, "theta", key), _get(d, "values", key))
    except DomainError as exc:
        raise ConfigError(str(exc), key=key) from exc
    raise ConfigError(f"unknown kernel form {form!r}", key=f"{key}.form")


def weight(d, key="weight", grid=None):
    if d is None:
        return Weight.constant(1.0)
    form = _get(d, "form", key)
    try:
        if form == "constant":
            return Weight.constant(number(d.get("c", 1.0), f"{key}.c"))
        if form == "power":
            return Weight.power(number(_get(d, "beta", key), f"{key}.beta"))
        if form == "sampled":
            if grid is None:
                raise ConfigError("sampled weights need a grid", key=key)
            return Weight.sampled(SampledFunction(grid, np.asarray(_get(d, "values", key), float)))
    except DomainError as exc:
        raise ConfigError(str(exc), key=key) from exc
    raise ConfigError(f"unknown weight form {form!r}", key=f"{key}.form")


def grid(d, key="grid", resolution=None):
    res = resolution if resolution is not None else _get(d, "resolution", key)
    try:
        if "half_width" in d:
            return centered_grid(number(d["half_width"], f"{key}.half_width"), int(res),
                                 n=int(d.get("n", 1)))
        lo = _get(d, "lo", key)
        hi = _get(d, "hi", key)
        return make_grid(Box(tuple(lo), tuple(hi)), res)
    except (DomainError, TypeError) as exc:
        raise ConfigError(str(exc), key=key) from exc


def operator(d, key="operator", n=1):
    kind = _get(d, "kind", key)
    if kind not in KINDS:
        raise ConfigError(f"unknown operator kind {kind!r}", key=f"{key}.kind")
    alpha = number(_get(d, "alpha", key), f"{key}.alpha")
    kern = kernel(d["kernel"], f"{key}.kernel", n=n) if "kernel" in d else None
    try:
        return OperatorSpec(kind, alpha, kern, n=n)
    except DomainError as exc:
        # numeric preconditions stay domain errors; only the key is added
        raise DomainError(f"{key}: {exc}") from exc


def test_family(d, key="family"):
    gen = _get(d, "generator", key)
    params = {k: v for k, v in d.items() if k != "generator"}
    if "base" in params:
        params["base"] = test_family(params["base"], f"{key}.base")
    try:
        return TestFamily(gen, params)
    except DomainError as exc:
        raise ConfigError(str(exc), key=f"{key}.generator") from exc


def function(d, g, key="function"):
    """A single sampled function: explicit ``values`` or a one-member generator."""
    if "values" in d:
        try:
            return SampledFunction(g, np.asarray(d["values"], dtype=float))
        except (DomainError, ValueError) as exc:
            raise ConfigError(str(exc), key=f"{key}.values") from exc
    fam = test_family(d, key)
    try:
        members = fam.sample(g)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad generator parameters ({exc})", key=key) from exc
    if len(members) != 1:
        raise ConfigError("expected a single function, got a ladder", key=key)
    return members[0][1]


def balls(d, g, key="balls"):
    r_min = number(_get(d, "r_min", key), f"{key}.r_min")
    r_max = number(_get(d, "r_max", key), f"{key}.r_max")
    growth = number(_get(d, "growth", key), f"{key}.growth")
    try:
        if "centers" in d:
            centers = np.asarray(d["centers"], dtype=float).reshape(-1, g.n)
            return BallFamily(centers, radius_ladder(r_min, r_max, growth))
        stride = d.get("center_stride", 1)
        if stride == "single":
            stride = g.resolution
        return ball_family(g, r_min, r_max, growth, int(stride),
                           extra_centers=d.get("extra_centers", ()))
    except (DomainError, ValueError) as exc:
        raise ConfigError(str(exc), key=key) from exc


def radii(d, key="radii"):
    if isinstance(d, list):
        return np.asarray(d, dtype=float)
    try:
        return radius_ladder(number(_get(d, "r_min", key), f"{key}.r_min"),
                             number(_get(d, "r_max", key), f"{key}.r_max"),
                             number(_get(d, "growth", key), f"{key}.growth"))
    except DomainError as exc:
        raise ConfigError(str(exc), key=key) from exc
