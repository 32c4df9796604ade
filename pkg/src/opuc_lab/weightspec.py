"""JSON weight descriptions for the command line.

A document looks like::

    {"kind": "trig", "params": {"cos": [1.25, 0.25]}, "grid": {"N": 4096},
     "normalize": "none", "bounds": {"lower": 1, "upper": 1.5}}

Unknown keys anywhere are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .errors import PreconditionError
from .extremal import assemble_global_weight, build
from .opuc import MeasureSpec
from .trig import Grid

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}
_EVEN = {"type": "integer", "minimum": 2, "multipleOf": 2}
_REGIME = {"enum": ["small", "large"]}


def _obj(props: dict, required=None) -> dict:
    return {"type": "object", "properties": props, "required": list(required or props),
            "additionalProperties": False}


PARAMS = {
    "constant": _obj({"value": _POS}),
    "trig": _obj({"cos": {"type": "array", "items": _NUM, "minItems": 1},
                  "sin": {"type": "array", "items": _NUM}}, ["cos"]),
    "small-deviation": _obj({"eps": _POS, "n": _EVEN}),
    "large-deviation": _obj({"alpha": _POS, "n": _EVEN, "interval_scale": _POS}, ["alpha", "n"]),
    "clipped": _obj({"regime": _REGIME, "param": _POS, "n": _EVEN}),
    "piecewise-arcs": _obj({
        "regime": _REGIME, "param": _POS,
        "arcs": {"type": "array", "minItems": 1,
                 "items": {"type": "array", "items": _NUM, "minItems": 2, "maxItems": 2}},
        "degrees": {"type": "array", "items": _EVEN, "minItems": 1},
    }),
    "samples": _obj({"values": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 4}}),
}

SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": sorted(PARAMS)},
        "params": {"type": "object"},
        "grid": _obj({"N": {"type": "integer", "minimum": 4}}),
        "normalize": {"enum": ["none", "probability", "mass-2pi"]},
        "bounds": _obj({"lower": _POS, "upper": _POS}),
    },
    "required": ["kind", "params"],
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"kind": {"const": k}}}, "then": {"properties": {"params": s}}}
        for k, s in PARAMS.items()
    ],
}


def validate(doc) -> None:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise PreconditionError(f"invalid weight spec: {exc.message}") from None
    N = doc.get("grid", {}).get("N")
    if N is not None and N & (N - 1):
        raise PreconditionError(f"grid N must be a power of two, got {N}")


def load(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PreconditionError(f"{path} is not valid JSON: {exc}") from None
    validate(doc)
    return doc


def _grid(doc: dict, degree: int, grid_n: int | None) -> Grid:
    N = doc.get("grid", {}).get("N") or grid_n
    if N is None:
        return Grid.for_degree(degree)
    return Grid(N)


def build_measure(doc: dict, degree: int = 0, grid_n: int | None = None) -> MeasureSpec:
    """Sample the described weight; ``degree`` sizes the default grid."""
    validate(doc)
    kind, p = doc["kind"], doc["params"]
    if kind == "samples":
        vals = np.asarray(p["values"], dtype=float)
        N = doc.get("grid", {}).get("N", vals.size)
        if N != vals.size:
            raise PreconditionError(f"{vals.size} samples but grid N={N}")
        m = MeasureSpec(vals, Grid(N), "samples")
    elif kind in ("constant", "trig"):
        g = _grid(doc, degree, grid_n)
        if kind == "constant":
            m = MeasureSpec(np.full(g.N, float(p["value"])), g, "constant")
        else:
            th = g.theta
            w = np.zeros(g.N)
            for k, a in enumerate(p["cos"]):
                w += a * np.cos(k * th)
            for k, b in enumerate(p.get("sin", []), start=1):
                w += b * np.sin(k * th)
            m = MeasureSpec(w, g, "trig")
    elif kind in ("small-deviation", "large-deviation", "clipped"):
        if kind == "clipped":
            regime, param, n = p["regime"], p["param"], p["n"]
        else:
            regime = kind.split("-")[0]
            param, n = (p["eps"], p["n"]) if regime == "small" else (p["alpha"], p["n"])
        kw = {"interval_scale": p["interval_scale"]} if "interval_scale" in p else {}
        g = _grid(doc, max(degree, 2 * n), grid_n)
        rep = build(regime, param, n, grid=g, **kw)
        m = rep.clipped if kind == "clipped" else rep.weight
    else:
        g = _grid(doc, max([degree] + p["degrees"]), grid_n)
        m, _ = assemble_global_weight(p["regime"], p["param"], p["arcs"], p["degrees"], grid=g)
    norm = doc.get("normalize", "none")
    if norm == "probability":
        m = m.probability()
    elif norm == "mass-2pi":
        m = m.normalized_to(2 * np.pi)
    b = doc.get("bounds")
    if b is not None and not (b["lower"] - 1e-12 <= m.min and m.max <= b["upper"] + 1e-12):
        raise PreconditionError(f"weight range [{m.min!r}, {m.max!r}] violates declared bounds")
    return m
