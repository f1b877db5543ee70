"""Deterministic SVG drawings of xy-projections.

Layers, bottom to top: mesh triangles, spanner edges, polylines (paths or
separator sides), points. Coordinates are printed with fixed precision so
identical inputs give byte-identical files.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

SIZE = 800
MARGIN = 20


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


class _Frame:
    def __init__(self, xy: np.ndarray):
        if len(xy) == 0:
            xy = np.array([[0.0, 0.0], [1.0, 1.0]])
        self.lo = xy.min(axis=0)
        span = float(np.max(xy.max(axis=0) - self.lo))
        self.scale = (SIZE - 2 * MARGIN) / (span if span > 0 else 1.0)

    def __call__(self, p) -> tuple[str, str]:
        x = MARGIN + (p[0] - self.lo[0]) * self.scale
        y = SIZE - MARGIN - (p[1] - self.lo[1]) * self.scale
        return _fmt(x), _fmt(y)


def render_svg(
    terrain=None,
    polylines: Sequence[np.ndarray] = (),
    points: np.ndarray | None = None,
    edges: Sequence[tuple[int, int]] = (),
    highlight: Sequence[int] = (),
) -> str:
    """Return SVG text. ``edges`` index into ``points``; ``highlight`` marks inside points."""
    boxes = []
    if terrain is not None:
        boxes.append(terrain.vertices[:, :2])
    boxes += [np.asarray(pl, dtype=float)[:, :2] for pl in polylines if len(pl)]
    if points is not None and len(points):
        points = np.asarray(points, dtype=float)[:, :2]
        boxes.append(points)
    frame = _Frame(np.vstack(boxes) if boxes else np.zeros((0, 2)))
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    if terrain is not None:
        out.append('<g id="mesh" fill="none" stroke="#999999" stroke-width="0.8">')
        for tri in terrain.triangles:
            pts = " ".join(",".join(frame(terrain.vertices[v])) for v in tri)
            out.append(f'<polygon points="{pts}"/>')
        out.append("</g>")
    if len(edges) and points is not None:
        out.append('<g id="edges" stroke="#3366cc" stroke-width="0.6" stroke-opacity="0.6">')
        for i, j in sorted((min(a, b), max(a, b)) for a, b in edges):
            (x1, y1), (x2, y2) = frame(points[i]), frame(points[j])
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
        out.append("</g>")
    if len(polylines):
        out.append('<g id="paths" fill="none" stroke="#cc2222" stroke-width="2">')
        for pl in polylines:
            pts = " ".join(",".join(frame(p)) for p in np.asarray(pl, dtype=float))
            out.append(f'<polyline points="{pts}"/>')
        out.append("</g>")
    if points is not None and len(points):
        marked = set(int(i) for i in highlight)
        out.append('<g id="points" stroke="black" stroke-width="0.5">')
        for k, p in enumerate(points):
            x, y = frame(p)
            fill = "#ff9900" if k in marked else "black"
            out.append(f'<circle cx="{x}" cy="{y}" r="3" fill="{fill}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
