"""``opuc-lab`` command line.

Exit codes: 0 success, 1 a suite check failed, 2 usage or configuration
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import experiments as ex
from . import weightspec
from .errors import ConstructionError, ConvergenceError, DegenerateMeasureError, OpucError, PreconditionError
from .extremal import build
from .opuc import orthonormal_polynomial, szego_data, verblunsky_from_measure, verblunsky_from_polynomial
from .output import loglog_svg, poly_rows, write_csv, write_json
from .solver import monic_fixed_point
from .trig import Grid, eval_on_grid

EXIT_OK, EXIT_ASSERT, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def grid_from_env() -> int | None:
    raw = os.environ.get("OPUC_GRID_N")
    if not raw:
        return None
    try:
        N = int(raw)
    except ValueError:
        raise UsageError(f"OPUC_GRID_N must be an integer, got {raw!r}") from None
    if N < 4 or N & (N - 1):
        raise UsageError(f"OPUC_GRID_N must be a power of two >= 4, got {N}")
    return N


def _outdir(path: str) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p


# --- construct -------------------------------------------------------------------


def cmd_construct(args, grid_n):
    if args.regime == "small":
        if args.eps is None:
            raise UsageError("--eps is required for the small regime")
        param = args.eps
    else:
        if args.alpha is None:
            raise UsageError("--alpha is required for the large regime")
        param = args.alpha
    g = ex._grid(grid_n, 2 * args.n)
    rep = build(args.regime, param, args.n, grid=g, splice_tail=args.splice_tail)
    out = _outdir(args.out)
    write_json(out / "construction-report.json", rep.to_dict())
    gr = rep.weight.grid
    rows = zip(gr.theta, rep.weight.samples, rep.clipped.samples)
    write_csv(out / "weight.csv", "weight/1", ["theta", "sigma", "w1"], rows)
    write_csv(out / "poly.csv", "poly/1", ["k", "re", "im"], poly_rows(rep.phi.coeffs))
    print(f"value_at_one={rep.value_at_one!r} consistency={rep.consistency!r}")
    return EXIT_OK


# --- opuc --------------------------------------------------------------------------


def cmd_opuc(args, grid_n):
    doc = weightspec.load(args.weight)
    if args.method == "fixed-point" and "bounds" not in doc:
        raise UsageError("the fixed-point method needs declared bounds in the weight spec")
    m = weightspec.build_measure(doc, degree=args.n, grid_n=grid_n)
    if args.method == "recursion":
        gamma = verblunsky_from_measure(m, args.n).gamma
        phi = orthonormal_polynomial(m, args.n)
    else:
        fp = monic_fixed_point(m, args.n)
        Phi = fp.poly
        vals = np.abs(eval_on_grid(Phi, m.grid)) ** 2
        norm2 = 2 * np.pi * float(np.mean(vals * m.samples))
        phi = Phi / math.sqrt(norm2)
        gamma = verblunsky_from_polynomial(phi, args.n).gamma
    sd = szego_data(m) if m.min > 0 else None
    out = _outdir(args.out)
    write_csv(out / "gamma.csv", "gamma/1", ["j", "re", "im"], poly_rows(gamma))
    write_csv(out / "poly.csv", "poly/1", ["k", "re", "im"], poly_rows(phi.coeffs))
    write_csv(out / "szego.csv", "szego/1", ["lambda", "Lambda"],
              [(sd.lambda_w, sd.Lambda_w)] if sd else [("nan", "nan")])
    return EXIT_OK


# --- suite -------------------------------------------------------------------------


_NLIST = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}
_FLIST = {"type": "array", "items": {"type": "number"}, "minItems": 1}


def _strict(props):
    return {"type": "object", "properties": props, "additionalProperties": False}


SUITE_SCHEMAS = {
    "growth": _strict({"regime": {"enum": ["small", "large", "control"]}, "param": {"type": "number"},
                       "n_list": _NLIST, "band": {"type": "array", "items": {"type": "number"},
                                                  "minItems": 2, "maxItems": 2}}),
    "envelope": _strict({"t_list": _FLIST}),
    "localization": _strict({"cases": {"type": "array", "items": {
        "type": "array", "prefixItems": [{"enum": ["small", "large"]}, {"type": "number"}, {"type": "integer"}],
        "minItems": 3, "maxItems": 3}}, "n_list": _NLIST}),
    "appendix": _strict({"eps_list": _FLIST, "alpha_list": _FLIST, "n_list": _NLIST}),
    "szego": _strict({"amplitude": {"type": "number"}, "N": {"type": "integer"}, "n_list": _NLIST}),
}

SUITE_DEFAULTS = {
    "growth": {"regime": "small", "param": 0.5, "n_list": [32, 64, 128, 256], "band": [0.1, 0.4]},
    "envelope": {"t_list": [1.1, 1.5, 16.0]},
    "localization": {"cases": [list(c) for c in ex.DEFAULT_LOCALIZATION], "n_list": [8, 16, 32, 64]},
    "appendix": {"eps_list": [0.2, 0.35, 0.5], "alpha_list": [0.8], "n_list": [256, 1024]},
    "szego": {"amplitude": 0.3, "N": 4096, "n_list": [16, 32, 64, 128]},
}


def load_suite_config(name: str, source: str | None) -> dict:
    cfg = dict(SUITE_DEFAULTS[name])
    if source and source != "default":
        try:
            user = json.loads(Path(source).read_text(encoding="utf-8"))
        except OSError as exc:
            raise UsageError(f"cannot read config {source}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {source} is not valid JSON: {exc}") from None
        try:
            jsonschema.validate(user, SUITE_SCHEMAS[name])
        except jsonschema.ValidationError as exc:
            raise UsageError(f"invalid {name} config: {exc.message}") from None
        cfg.update(user)
    return cfg


def run_suite(name: str, cfg: dict, grid_n: int | None = None) -> ex.SuiteResult:
    if name == "growth":
        band = tuple(cfg["band"]) if cfg.get("band") else None
        return ex.growth_suite(cfg["regime"], cfg["param"], cfg["n_list"], band, grid_n)
    if name == "envelope":
        return ex.run_upper_lower_envelope(cfg["t_list"], grid_n=grid_n)
    if name == "localization":
        cases = [ex.constructed_case(r, p, n, grid_n) for r, p, n in cfg["cases"]]
        return ex.run_localization_suite(cases, cfg["n_list"])
    if name == "appendix":
        return ex.run_appendix_suites(cfg["eps_list"], cfg["alpha_list"], cfg["n_list"])
    if name == "szego":
        g = Grid(grid_n or cfg["N"])
        return ex.run_szego_asymptotics(ex.smooth_test_weight(g, cfg["amplitude"]), cfg["n_list"])
    raise UsageError(f"unknown suite {name!r}")


def write_suite(res: ex.SuiteResult, out: Path, cfg: dict) -> None:
    write_csv(out / f"{res.name}.csv", f"suite-{res.name}/1", res.columns, res.rows)
    summary = res.summary()
    summary["config"] = cfg
    summary["seed"] = ex.DEFAULT_SEED
    write_json(out / "summary.json", summary)
    if res.plot is not None:
        p = res.plot
        svg = loglog_svg(p["x"], p["y"], p.get("slope"), p.get("intercept"), p.get("y2"), title=res.name)
        (out / f"{res.name}.svg").write_text(svg, encoding="utf-8", newline="")


def cmd_suite(args, grid_n):
    if args.name not in SUITE_SCHEMAS:
        raise UsageError(f"unknown suite {args.name!r}; choose from {', '.join(SUITE_SCHEMAS)}")
    cfg = load_suite_config(args.name, args.config)
    res = run_suite(args.name, cfg, grid_n)
    write_suite(res, _outdir(args.out), cfg)
    for c in res.checks:
        print(f"{c.status:6s} {c.name} {'' if c.value is None else repr(c.value)} {c.bound}".rstrip())
    return EXIT_OK if res.ok else EXIT_ASSERT


# --- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opuc-lab", description="Orthogonal polynomials on the unit circle and extremal weights.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", help="build an extremal weight and its polynomial")
    c.add_argument("--regime", choices=["small", "large"], required=True)
    c.add_argument("--eps", type=float)
    c.add_argument("--alpha", type=float)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--out", default=".")
    c.add_argument("--splice-tail", type=int, default=4)
    c.set_defaults(func=cmd_construct)

    o = sub.add_parser("opuc", help="orthonormal polynomial and coefficients of a weight")
    o.add_argument("--weight", required=True)
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--method", choices=["recursion", "fixed-point"], default="recursion")
    o.add_argument("--out", default=".")
    o.set_defaults(func=cmd_opuc)

    s = sub.add_parser("suite", help="run an experiment suite")
    s.add_argument("--name", required=True)
    s.add_argument("--config", default="default")
    s.add_argument("--out", default=".")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        grid_n = grid_from_env()
        return args.func(args, grid_n)
    except UsageError as exc:
        print(f"opuc-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"opuc-lab: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstructionError, DegenerateMeasureError, ConvergenceError, OpucError, FloatingPointError) as exc:
        print(f"opuc-lab: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
