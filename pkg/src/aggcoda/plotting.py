"""Static SVG rendering of principal maps.

Row points are filled discs, column points open circles; the two axes cross
at the origin.  Output depends only on the input coordinates.
"""

from __future__ import annotations

from html import escape

import numpy as np

from .factorization import PrincipalMap

ROW_COLOR = "#1f4e9a"
COL_COLOR = "#b2182b"


def _num(x: float) -> str:
    return f"{x:.2f}"


def map_svg(pm: PrincipalMap, *, title: str = "", size: int = 560, margin: int = 60) -> str:
    pts = np.vstack([pm.rows.coords, pm.cols.coords])
    if pts.size == 0:
        pts = np.zeros((1, 2))
    lo = np.minimum(pts.min(axis=0), 0.0)
    hi = np.maximum(pts.max(axis=0), 0.0)
    span = np.where(hi - lo > 0, hi - lo, 1.0)
    lo, hi = lo - 0.08 * span, hi + 0.08 * span
    inner = size - 2 * margin

    def sx(x):
        return margin + (x - lo[0]) / (hi[0] - lo[0]) * inner

    def sy(y):
        return size - margin - (y - lo[1]) / (hi[1] - lo[1]) * inner

    a, b = pm.axes
    ox, oy = sx(0.0), sy(0.0)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}" font-family="Helvetica, Arial, sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{margin}" y1="{_num(oy)}" x2="{size - margin}" y2="{_num(oy)}" stroke="#555" stroke-width="1"/>',
        f'<line x1="{_num(ox)}" y1="{margin}" x2="{_num(ox)}" y2="{size - margin}" stroke="#555" stroke-width="1"/>',
        f'<text x="{size - margin}" y="{_num(oy - 6)}" text-anchor="end" fill="#333">'
        f'axis {a} (δ={pm.deltas[0]:.4g})</text>',
        f'<text x="{_num(ox + 6)}" y="{margin - 6}" fill="#333">axis {b} (δ={pm.deltas[1]:.4g})</text>',
    ]
    if title:
        out.append(f'<text x="{size / 2:.0f}" y="24" text-anchor="middle" font-size="14">{escape(title)}</text>')
    for label, (x, y) in zip(pm.rows.labels, pm.rows.coords):
        px, py = sx(x), sy(y)
        out.append(f'<circle cx="{_num(px)}" cy="{_num(py)}" r="3.5" fill="{ROW_COLOR}"/>')
        out.append(f'<text x="{_num(px + 5)}" y="{_num(py - 5)}" fill="{ROW_COLOR}">{escape(label)}</text>')
    for label, (x, y) in zip(pm.cols.labels, pm.cols.coords):
        px, py = sx(x), sy(y)
        out.append(f'<circle cx="{_num(px)}" cy="{_num(py)}" r="3.5" fill="none" '
                   f'stroke="{COL_COLOR}" stroke-width="1.5"/>')
        out.append(f'<text x="{_num(px + 5)}" y="{_num(py + 12)}" fill="{COL_COLOR}" '
                   f'font-style="italic">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
