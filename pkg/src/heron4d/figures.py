"""Raster wireframe figures via matplotlib (Agg)."""

from __future__ import annotations

import os
from typing import Sequence

from .geometry4 import DEFAULT_PROJECTION, Piece, piece_class, project_wireframe
from .svg import OTHER, PALETTE


def render_png(pieces: Sequence[Piece], projection, path: str, title: str = "") -> str:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.collections import LineCollection

    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig, ax = plt.subplots(figsize=(4.8, 4.8), dpi=100)
    seen = set()
    for p in pieces:
        cls = piece_class(p)
        segs = [
            [(float(a[0]), float(a[1])), (float(b[0]), float(b[1]))]
            for a, b in project_wireframe(p, projection or DEFAULT_PROJECTION)
        ]
        ax.add_collection(
            LineCollection(segs, colors=PALETTE.get(cls, OTHER), linewidths=0.8, label=None if cls in seen else cls)
        )
        seen.add(cls)
    ax.autoscale()
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=9)
    if seen:
        ax.legend(loc="upper left", fontsize=7, frameon=False)
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path
