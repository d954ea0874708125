"""Command-line frontend.

Exit codes: 0 success, 2 config or parse error, 3 numeric domain error,
4 tolerance failure (the report is still written).
"""

import argparse
import copy
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import config as cfg
from .experiments import (unboundedness_probe, semigroup_check, verify_theorem1,
                          verify_theorem2, verify_theorem3, standard_sweep)
from .kernels import dini_profile
from .operators import (homogeneous_fractional_integral, maximal_on_grid, riesz_potential)
from .spaces import (bmo_seminorm, lp_norm, morrey_norm, weak_lp_norm, weighted_bmo_norm,
                     weighted_linf_norm)
from .validation import ConfigError, DomainError
from .weights import apq_constant

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_TOLERANCE = 0, 2, 3, 4

_LADDER = [2.0 ** k for k in range(-3, 4)]
_ORIGIN_BALLS = {"centers": [[0.0]], "r_min": 2.0 ** -6, "r_max": 64.0, "growth": 2.0 ** 0.25}
_BUMP = {"generator": "gaussian-bump", "center": [0.0], "width": 1.0}

STUDIES = {
    "theorem1-dilation": {
        "grid": {"half_width": 64.0, "resolution": 2048},
        "alpha": 0.5, "s": "inf", "kernel": None, "weight": {"form": "constant", "c": 1.0},
        "family": {"generator": "dilation-ladder", "base": _BUMP, "lambdas": _LADDER},
        "balls": _ORIGIN_BALLS,
    },
    "theorem2-dilation": {
        "grid": {"half_width": 64.0, "resolution": 2048},
        "alpha": 0.5, "p": 1.0, "s": "inf",
        "kernel": {"form": "constant", "c": 1.0, "n": 1},
        "weight": {"form": "power", "beta": -0.25},
        "family": {"generator": "dilation-ladder", "base": _BUMP, "lambdas": _LADDER},
        "balls": _ORIGIN_BALLS,
    },
    "theorem2-translation": {
        "grid": {"half_width": 32.0, "resolution": 1024},
        "alpha": 0.5, "p": 1.0, "s": "inf",
        "kernel": {"form": "constant", "c": 1.0, "n": 1},
        "weight": {"form": "constant", "c": 1.0},
        "family": {"generator": "translation-ladder", "base": _BUMP,
                   "shifts": [[-4.0], [-2.0], [0.0], [2.0], [4.0]]},
        "balls": {"center_stride": 8, "r_min": 0.25, "r_max": 16.0, "growth": 2.0 ** 0.5},
    },
    "theorem3-dilation": {
        "grid": {"half_width": 64.0, "resolution": 2048},
        "alpha": 0.5, "p": 1.0, "s": "inf",
        "kernel": {"form": "constant", "c": 1.0, "n": 1},
        "weight": {"form": "power", "beta": -0.25},
        "family": {"generator": "dilation-ladder", "base": _BUMP, "lambdas": _LADDER},
        "balls": _ORIGIN_BALLS,
    },
    "unboundedness": {
        "n": 1, "alpha": 0.5, "cutoffs": [2.0 ** -k for k in range(4, 13)], "resolution": 32769,
    },
    "semigroup": {
        "grid": {"half_width": 2048.0, "resolution": 8192},
        "beta": 0.3, "gamma": 0.4, "function": _BUMP, "tolerance": 0.05,
    },
}


# ---------------------------------------------------------------- output

def _fmt(x):
    x = float(x)
    if math.isfinite(x):
        return repr(x)
    return "inf" if x > 0 else ("-inf" if x < 0 else "nan")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else _fmt(x)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _write(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _dump_json(path, obj):
    _write(path, json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n")


def _dump_rows(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _write(path, buf.getvalue())


def _flat(prefix, obj, out):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flat(f"{prefix}.{k}" if prefix else str(k), obj[k], out)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flat(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, obj))
    return out


def _emit(args, stem, result, meta):
    """Write the result as JSON or as a flat key/value CSV, plus meta.json."""
    result = _jsonable(result)
    if args.format == "csv":
        _dump_rows(os.path.join(args.out, f"{stem}.csv"), ["key", "value"],
                   _flat("", result, []))
    else:
        _dump_json(os.path.join(args.out, f"{stem}.json"), result)
    _dump_json(os.path.join(args.out, "meta.json"), meta)


def _meta(args, doc):
    return {"subcommand": args.command, "config": doc, "resolution_override": args.resolution,
            "seed": args.seed, "format": args.format, "version": __version__}


# ---------------------------------------------------------------- commands

def cmd_eval(args, doc):
    g = cfg.grid(cfg._get(doc, "grid", ""), resolution=args.resolution)
    f = cfg.function(cfg._get(doc, "function", ""), g)
    op = cfg.operator(cfg._get(doc, "operator", ""), n=g.n)
    if op.kind == "riesz":
        out = riesz_potential(f, op.alpha)
    elif op.kind == "homogeneous-integral":
        out = homogeneous_fractional_integral(f, op.kernel, op.alpha)
    else:
        radii = cfg.radii(cfg._get(doc, "radii", ""))
        out = maximal_on_grid(f, op.alpha, radii, op.kernel)
    pts = g.points()
    vals = out.values.ravel()
    cols = ["x", "y"][: g.n]
    _dump_rows(os.path.join(args.out, "values.csv"), cols + ["value"],
               [[_fmt(c) for c in p] + [_fmt(v)] for p, v in zip(pts, vals)])
    _dump_json(os.path.join(args.out, "meta.json"),
               dict(_meta(args, doc), operator={"kind": op.kind, "alpha": op.alpha,
                                                "kernel": None if op.kernel is None
                                                else op.kernel.to_dict()},
                    grid={"lo": list(g.box.lo), "hi": list(g.box.hi), "resolution": g.resolution}))
    return EXIT_OK


def cmd_norm(args, doc):
    g = cfg.grid(cfg._get(doc, "grid", ""), resolution=args.resolution)
    f = cfg.function(cfg._get(doc, "function", ""), g)
    spec = cfg._get(doc, "norm", "")
    space = cfg._get(spec, "space", "norm")
    p = cfg.exponent(spec.get("p", 1.0), "norm.p")
    fam = cfg.balls(doc["balls"], g) if "balls" in doc else None

    def need_family():
        if fam is None:
            raise ConfigError(f"space {space!r} needs a ball family", key="balls")
        return fam

    result = {"space": space}
    if space == "lp":
        result["value"] = lp_norm(f, p, cfg.weight(spec.get("w"), "norm.w", g))
    elif space == "weak-lp":
        result["value"] = weak_lp_norm(f, p, cfg.weight(spec.get("w"), "norm.w", g))
    elif space == "morrey":
        kappa = cfg.number(spec.get("kappa", 0.0), "norm.kappa")
        res = morrey_norm(f, p, kappa, cfg.weight(spec.get("mu"), "norm.mu", g),
                          cfg.weight(spec.get("nu"), "norm.nu", g), need_family(),
                          return_argmax=True)
        result.update(res.to_dict())
    elif space == "bmo":
        result.update(bmo_seminorm(f, need_family(), return_argmax=True).to_dict())
    elif space in ("weighted-bmo", "weighted-linf"):
        func = weighted_bmo_norm if space == "weighted-bmo" else weighted_linf_norm
        res = func(f, cfg.weight(spec.get("w"), "norm.w", g), need_family(), return_argmax=True)
        result.update(res.to_dict())
    else:
        raise ConfigError(f"unknown space {space!r}", key="norm.space")
    _emit(args, "norm", result, _meta(args, doc))
    return EXIT_OK


def cmd_apq(args, doc):
    w_doc = cfg._get(doc, "weight", "")
    g = cfg.grid(doc["grid"], resolution=args.resolution) if "grid" in doc else None
    w = cfg.weight(w_doc, "weight", g)
    p = cfg.exponent(cfg._get(doc, "p", ""), "p")
    q = cfg.exponent(cfg._get(doc, "q", ""), "q")
    balls_doc = doc.get("balls", "standard")
    if balls_doc == "standard":
        n = g.n if g is not None else int(doc.get("n", 1))
        fam = standard_sweep(n)
    else:
        if g is None:
            raise ConfigError("a custom ball family needs a grid", key="grid")
        fam = cfg.balls(balls_doc, g)
    report = apq_constant(w, p, q, fam, g)
    _emit(args, "apq", dict(report.to_dict(), weight=w.to_dict()), _meta(args, doc))
    return EXIT_OK


def cmd_dini(args, doc):
    kern = cfg.kernel(cfg._get(doc, "kernel", ""))
    s = cfg.exponent(doc.get("s", 2.0), "s")
    delta_min = cfg.number(doc.get("delta_min", 1e-3), "delta_min")
    prof = dini_profile(kern, s, delta_min)
    result = {"kernel": kern.to_dict(), "s": s, "delta_min": delta_min,
              "value": prof.dini_value, "divergent": prof.divergent,
              "last_decade_increment": prof.last_decade_increment,
              "previous_decade_increment": prof.previous_decade_increment,
              "profile": [{"delta": d, "omega": o}
                          for d, o in zip(prof.deltas.tolist(), prof.omega_values.tolist())]}
    _emit(args, "dini", result, _meta(args, doc))
    return EXIT_OK


def _run_theorem(study, doc, resolution):
    g = cfg.grid(cfg._get(doc, "grid", ""), resolution=resolution)
    alpha = cfg.number(cfg._get(doc, "alpha", ""), "alpha")
    s = cfg.exponent(doc.get("s", "inf"), "s")
    kern = cfg.kernel(doc["kernel"], "kernel", n=g.n) if doc.get("kernel") else None
    w = cfg.weight(doc.get("weight"), "weight", g)
    fam = cfg.test_family(cfg._get(doc, "family", ""))
    balls = cfg.balls(cfg._get(doc, "balls", ""), g)
    tol = doc.get("tolerances")
    if study.startswith("theorem1"):
        return verify_theorem1(fam, g, balls, alpha, kern, w, s, tol)
    p = cfg.exponent(cfg._get(doc, "p", ""), "p")
    func = verify_theorem2 if study.startswith("theorem2") else verify_theorem3
    return func(fam, g, balls, alpha, p, kern, w, s, tol)


def run_study(study, doc, resolution=None):
    """Run a registered study on a config document and return its RatioReport."""
    if study not in STUDIES:
        raise ConfigError(f"unknown study {study!r}; registered: {', '.join(sorted(STUDIES))}",
                          key="study")
    if study == "unboundedness":
        res = resolution or int(doc.get("resolution", 32769))
        return unboundedness_probe(int(doc.get("n", 1)), cfg.number(doc.get("alpha", 0.5), "alpha"),
                                   doc.get("cutoffs"), res)
    if study == "semigroup":
        g = cfg.grid(cfg._get(doc, "grid", ""), resolution=resolution)
        f = cfg.function(cfg._get(doc, "function", ""), g)
        return semigroup_check(cfg.number(cfg._get(doc, "beta", ""), "beta"),
                               cfg.number(cfg._get(doc, "gamma", ""), "gamma"), f,
                               cfg.number(doc.get("tolerance", 0.05), "tolerance"))
    return _run_theorem(study, doc, resolution)


def cmd_verify(args, doc):
    report = run_study(args.study, doc, args.resolution)
    _write(os.path.join(args.out, "report.json"), report.to_json())
    _write(os.path.join(args.out, "report.csv"), report.to_csv())
    _dump_json(os.path.join(args.out, "meta.json"), dict(_meta(args, doc), study=args.study))
    print(f"{args.study}: {'pass' if report.passed else 'FAIL'} (spread {_fmt(report.spread)})")
    return EXIT_OK if report.passed else EXIT_TOLERANCE


COMMANDS = {"eval": cmd_eval, "norm": cmd_norm, "apq": cmd_apq, "dini": cmd_dini,
            "verify": cmd_verify}


def build_parser():
    parser = argparse.ArgumentParser(prog="morreylab",
                                     description="Fractional integrals on weighted Morrey spaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name == "verify":
            sp.add_argument("study", help="registered study: " + ", ".join(sorted(STUDIES)))
            sp.add_argument("--config", help="JSON config (defaults to the study's built-in config)")
        else:
            sp.add_argument("--config", required=True, help="JSON config")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--resolution", type=int, default=None, help="override grid resolution")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "verify" and args.study not in STUDIES:
            raise ConfigError(f"unknown study {args.study!r}; registered: "
                              f"{', '.join(sorted(STUDIES))}", key="study")
        if args.config:
            doc = cfg.load(args.config)
        else:
            doc = copy.deepcopy(STUDIES[args.study])
        if args.resolution is not None and args.resolution < 2:
            raise ConfigError("resolution must be at least 2", key="--resolution")
        os.makedirs(args.out, exist_ok=True)
        return COMMANDS[args.command](args, doc)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyError as exc:
        print(f"config error: [{exc.args[0]}] missing entry", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
