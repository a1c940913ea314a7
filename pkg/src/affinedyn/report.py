"""Deterministic JSON, CSV and SVG writers."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .dynamics import CLOSED_DISC, SINGLETON_ONE, SpectrumDescriptor


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    text = format(x, ".17g")
    if "." not in text and "e" not in text:
        text += ".0"
    return text


def _escape(s: str) -> str:
    out = s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{out}"'


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits and sorted-by-insertion keys."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent, _level)
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_escape(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [f"{pad}{dumps(v, indent, _level + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "to_json"):
        return dumps(obj.to_json(), indent, _level)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_json(path: Path, obj: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj) + "\n")
    return path


def write_csv(path: Path, rows: Iterable[Iterable[Any]]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        for row in rows:
            writer.writerow([_fmt_float(v).strip('"') if isinstance(v, float) else v for v in row])
    return path


SVG_SIZE = 800


def spectrum_svg(desc: SpectrumDescriptor, samples: int = 512) -> str:
    """Self-contained 800x800 SVG of the spectrum with the unit circle dashed."""
    extent = max(1.0, desc.max_modulus) * 1.15
    half = SVG_SIZE / 2.0
    scale = half / extent

    def xy(z: complex) -> tuple[str, str]:
        return f"{half + scale * z.real:.3f}", f"{half - scale * z.imag:.3f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        f'<rect width="{SVG_SIZE}" height="{SVG_SIZE}" fill="white"/>',
        f'<line x1="0" y1="{half}" x2="{SVG_SIZE}" y2="{half}" stroke="#bbbbbb" stroke-width="1"/>',
        f'<line x1="{half}" y1="0" x2="{half}" y2="{SVG_SIZE}" stroke="#bbbbbb" stroke-width="1"/>',
    ]
    if desc.kind == SINGLETON_ONE:
        x, y = xy(1 + 0j)
        parts.append(f'<circle cx="{x}" cy="{y}" r="5" fill="#c0392b"/>')
    else:
        pts = desc.sample(samples)
        coords = " ".join(",".join(xy(complex(z))) for z in pts)
        if desc.kind == CLOSED_DISC:
            parts.append(
                f'<polygon points="{coords}" fill="#c0392b" fill-opacity="0.35" stroke="#c0392b" stroke-width="2"/>'
            )
        else:
            parts.append(f'<polyline points="{coords}" fill="none" stroke="#c0392b" stroke-width="2"/>')
        if desc.kind == "spiral_with_zero":
            x, y = xy(0j)
            parts.append(f'<circle cx="{x}" cy="{y}" r="4" fill="#c0392b"/>')
    r = scale
    parts.append(
        f'<circle cx="{half}" cy="{half}" r="{r:.3f}" fill="none" stroke="#2c3e50" '
        'stroke-width="1.5" stroke-dasharray="8,6"/>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
