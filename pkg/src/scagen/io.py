"""Point files (CSV / JSON) and static SVG plots.

CSV files have the header ``x,y`` and one point per row; JSON files hold an
array of ``{"x": ..., "y": ...}`` objects. Floats are written in their
shortest round-trip form, so ``read_points(write_points(p))`` is exact.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from .exceptions import InvalidInputError, PointsFormatError
from .scagnostics import MEASURE_NAMES

__all__ = [
    "FORMATS",
    "infer_format",
    "parse_points",
    "format_points",
    "read_points",
    "write_points",
    "atomic_write_text",
    "render_svg",
    "emit_plot",
]

FORMATS = ("csv", "json")


def infer_format(path, fmt: str | None = None) -> str:
    if fmt is not None:
        fmt = fmt.lower()
        if fmt not in FORMATS:
            raise InvalidInputError(f"unknown format {fmt!r}; expected one of {FORMATS}")
        return fmt
    suffix = Path(path).suffix.lower().lstrip(".")
    return suffix if suffix in FORMATS else "csv"


def _number(text: str, line: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise PointsFormatError(f"not a number: {text.strip()!r}", line) from None
    if not math.isfinite(v):
        raise PointsFormatError(f"non-finite value {text.strip()!r}", line)
    return v


def _parse_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise PointsFormatError("empty file, expected header 'x,y'", 1)
    header = [c.strip().lower() for c in rows[0]]
    if header != ["x", "y"]:
        raise PointsFormatError(f"expected header 'x,y', got {','.join(rows[0])!r}", 1)
    pts = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise PointsFormatError(f"expected 2 fields, got {len(row)}", lineno)
        pts.append((_number(row[0], lineno), _number(row[1], lineno)))
    return np.array(pts, dtype=np.float64).reshape(-1, 2)


def _parse_json(text: str) -> np.ndarray:
    if not text.strip():
        raise PointsFormatError("empty file, expected a JSON array", 1)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PointsFormatError(exc.msg, exc.lineno) from None
    if not isinstance(data, list):
        raise PointsFormatError("expected a JSON array of {x, y} objects", 1)
    pts = []
    for i, item in enumerate(data):
        if not isinstance(item, dict) or "x" not in item or "y" not in item:
            raise PointsFormatError(f"item {i} is not an object with keys 'x' and 'y'")
        vals = []
        for key in ("x", "y"):
            v = item[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise PointsFormatError(f"item {i}: {key} is not a finite number: {v!r}")
            vals.append(float(v))
        pts.append(vals)
    return np.array(pts, dtype=np.float64).reshape(-1, 2)


def parse_points(text: str, fmt: str = "csv") -> np.ndarray:
    return _parse_csv(text) if infer_format("", fmt) == "csv" else _parse_json(text)


def format_points(points, fmt: str = "csv") -> str:
    p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if infer_format("", fmt) == "csv":
        lines = ["x,y"] + [f"{float(x)!r},{float(y)!r}" for x, y in p]
        return "\n".join(lines) + "\n"
    items = [f'{{"x": {float(x)!r}, "y": {float(y)!r}}}' for x, y in p]
    return "[\n" + ",\n".join(" " + s for s in items) + "\n]\n" if items else "[]\n"


def read_points(path, fmt: str | None = None) -> np.ndarray:
    """Read a point file; the format defaults to the file suffix."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_points(text, infer_format(path, fmt))


def atomic_write_text(path, text: str) -> None:
    """Write via a sibling temporary file and rename, so failures leave no partial file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent if str(path.parent) else ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_points(points, path, fmt: str | None = None) -> None:
    atomic_write_text(path, format_points(points, infer_format(path, fmt)))


def render_svg(points, achieved, size: int = 400) -> str:
    """SVG scatterplot on unit-square axes with the nine measures as a caption."""
    p = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    if p.shape[0] < 1:
        raise InvalidInputError("plot needs at least one point")
    values = achieved.as_dict() if hasattr(achieved, "as_dict") else dict(achieved)
    margin = 40
    inner = size - 2 * margin
    caption_h = 20 * len(MEASURE_NAMES) + 20
    height = size + caption_h

    def sx(x):
        return margin + x * inner

    def sy(y):
        return margin + (1.0 - y) * inner

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{height}" '
        f'viewBox="0 0 {size} {height}">',
        f'<rect x="0" y="0" width="{size}" height="{height}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{inner}" height="{inner}" fill="none" stroke="black"/>',
    ]
    for t in (0.0, 0.5, 1.0):
        out.append(f'<text x="{sx(t):.2f}" y="{size - margin + 15}" font-size="10" text-anchor="middle">{t:g}</text>')
        out.append(f'<text x="{margin - 6}" y="{sy(t) + 3:.2f}" font-size="10" text-anchor="end">{t:g}</text>')
    for x, y in p:
        out.append(f'<circle cx="{sx(x):.3f}" cy="{sy(y):.3f}" r="3" fill="steelblue"/>')
    out.append(f'<g font-family="monospace" font-size="12">')
    for i, name in enumerate(MEASURE_NAMES):
        v = values.get(name)
        label = f"{name}: {v:.4f}" if v is not None else f"{name}: n/a"
        out.append(f'<text x="{margin}" y="{size + 10 + 20 * i}">{escape(label)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(points, achieved, path) -> None:
    atomic_write_text(path, render_svg(points, achieved))
