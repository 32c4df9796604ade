"""Deterministic CSV / JSON / SVG writers."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from . import __version__


def fmt(x) -> str:
    """Shortest round-trip text for numbers; ``true``/``false`` for booleans."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def csv_text(schema: str, columns, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# opuc-lab v{__version__} schema={schema}\n")
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(columns)
    for r in rows:
        vals = [r[c] for c in columns] if isinstance(r, dict) else list(r)
        wr.writerow([fmt(v) for v in vals])
    return buf.getvalue()


def write_csv(path: Path, schema: str, columns, rows) -> None:
    Path(path).write_text(csv_text(schema, columns, rows), encoding="utf-8", newline="")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: Path, obj) -> None:
    Path(path).write_text(json_text(obj), encoding="utf-8", newline="")


def poly_rows(coeffs) -> list[tuple]:
    return [(k, float(c.real), float(c.imag)) for k, c in enumerate(np.asarray(coeffs))]


def loglog_svg(x, y, slope: float | None = None, intercept: float | None = None,
               y2=None, title: str = "", width: int = 480, height: int = 360) -> str:
    """Single-panel log-log polyline, optional fitted line and second series."""
    lx = np.log(np.asarray(x, dtype=float))
    series = [np.log(np.asarray(y, dtype=float))]
    if y2 is not None:
        series.append(np.log(np.maximum(np.asarray(y2, dtype=float), 1e-300)))
    if slope is not None:
        series.append(intercept + slope * lx)
    allv = np.concatenate(series)
    x0, x1 = float(lx.min()), float(lx.max())
    y0, y1 = float(allv.min()), float(allv.max())
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pad = 40

    def pts(ys):
        px = pad + (lx - x0) / (x1 - x0) * (width - 2 * pad)
        py = height - pad - (ys - y0) / (y1 - y0) * (height - 2 * pad)
        return " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))

    colors = ["#1f77b4", "#2ca02c", "#d62728"]
    dash = ["", "", ' stroke-dasharray="6,4"']
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
             f'<rect width="{width}" height="{height}" fill="white"/>',
             f'<text x="{pad}" y="20" font-size="12">{title}</text>',
             f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
             f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>']
    for i, ys in enumerate(series):
        k = i if (slope is None or i < len(series) - 1) else 2
        lines.append(f'<polyline fill="none" stroke="{colors[k]}"{dash[k]} points="{pts(ys)}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
