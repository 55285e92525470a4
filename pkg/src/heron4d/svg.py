"""Deterministic SVG wireframes of 4-D pieces under a linear projection to the plane."""

from __future__ import annotations

import os
from typing import Sequence

from .exact_scalar import QuadScalar
from .geometry4 import DEFAULT_PROJECTION, Piece, piece_class, project_wireframe

CANVAS = 480
PALETTE = {
    "triangle x triangle": "#1f77b4",
    "triangle x square": "#2ca02c",
    "square x triangle": "#ff7f0e",
    "square x square": "#8c564b",
    "simplex": "#9467bd",
    "box": "#555555",
}
OTHER = "#d62728"


def _num(v: QuadScalar) -> str:
    return v.decimal_text(12)


def render_svg(pieces: Sequence[Piece], projection=DEFAULT_PROJECTION, title: str = "") -> str:
    """SVG text; coordinates are exact projections printed to 12 significant digits.

    The viewBox is the projected bounding box, y pointing up.
    """
    groups = [(piece_class(p), project_wireframe(p, projection)) for p in pieces]
    pts = [pt for _, segs in groups for seg in segs for pt in seg]
    if pts:
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    else:
        x0 = y0 = QuadScalar.parse("0")
        x1 = y1 = QuadScalar.parse("1")
    w, h = x1 - x0, y1 - y0
    if w.is_zero():
        w = QuadScalar.parse("1")
    if h.is_zero():
        h = QuadScalar.parse("1")
    pad_w, pad_h = w / 20, h / 20
    view = f"{_num(x0 - pad_w)} {_num(-y1 - pad_h)} {_num(w + 2 * pad_w)} {_num(h + 2 * pad_h)}"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="{view}" '
        'preserveAspectRatio="xMidYMid meet">',
    ]
    if title:
        out.append(f"  <title>{_escape(title)}</title>")
    out.append('  <rect x="0" y="0" width="100%" height="100%" fill="white"/>')
    for k, (cls, segs) in enumerate(groups):
        color = PALETTE.get(cls, OTHER)
        out.append(
            f'  <g id="piece-{k + 1}" class="{cls.replace(" ", "")}" stroke="{color}" '
            'stroke-width="1" fill="none" vector-effect="non-scaling-stroke">'
        )
        for a, b in segs:
            out.append(
                f'    <line x1="{_num(a[0])}" y1="{_num(-a[1])}" x2="{_num(b[0])}" y2="{_num(-b[1])}" '
                'vector-effect="non-scaling-stroke"/>'
            )
        out.append("  </g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_svg(pieces: Sequence[Piece], projection, path: str, title: str = "") -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    text = render_svg(pieces, projection or DEFAULT_PROJECTION, title)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def count_lines(svg_text: str) -> int:
    return svg_text.count("<line ")
