"""Deterministic SVG rendering of a triangulated surface.

Triangles are developed by a breadth-first walk (translations only), so
window models come out as their cylinder pictures.  Gluings that the
layout could not realize adjacently are labeled in matching pairs at the
edge midpoints.  Coordinates embed at 1e-12 precision; no timestamps.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from ayrel.field import nf_decimal
from ayrel.surface import BLACK, WHITE, Surface

_EPS = Fraction(1, 10**13)


def _f(x):
    return nf_decimal(x, digits=12)


def _develop(surface):
    placed = {}
    order = []
    for seed in range(len(surface.triangles)):
        if seed in placed:
            continue
        placed[seed] = surface.triangles[seed]
        dq = deque([seed])
        while dq:
            t = dq.popleft()
            for e in range(3):
                t2, e2 = surface.gluing[(t, e)]
                if t2 in placed:
                    continue
                tau = placed[t][e] - surface.triangles[t2][(e2 + 1) % 3]
                placed[t2] = tuple(v + tau
                                   for v in surface.triangles[t2])
                dq.append(t2)
        order.append(seed)
    return placed


def render_svg(surface: Surface, scale=160):
    placed = _develop(surface)
    pts = {}
    for t, tri in placed.items():
        pts[t] = [(_f(v.x), _f(v.y)) for v in tri]
    xs = [p[0] for tri in pts.values() for p in tri]
    ys = [p[1] for tri in pts.values() for p in tri]
    pad = 0.15
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    width = (x1 - x0) * scale
    height = (y1 - y0) * scale

    def sx(x):
        return (x - x0) * scale

    def sy(y):
        return (y1 - y) * scale  # flip into screen coordinates

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.2f}" '
        f'height="{height:.2f}" viewBox="0 0 {width:.2f} {height:.2f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for t in sorted(pts):
        poly = " ".join(f"{sx(x):.12f},{sy(y):.12f}" for (x, y) in pts[t])
        lines.append(f'<polygon points="{poly}" fill="#f2f2f2" '
                     'stroke="#bbbbbb" stroke-width="0.6"/>')

    # adjacency in the layout: realized edges drawn thin, the rest get
    # matching pair labels
    def placed_match(t, e):
        t2, e2 = surface.gluing[(t, e)]
        a = placed[t][e]
        b = placed[t][(e + 1) % 3]
        a2 = placed[t2][(e2 + 1) % 3]
        b2 = placed[t2][e2]
        return a == a2 and b == b2

    label = 0
    labels = {}
    for (t, e) in sorted(surface.gluing):
        if (t, e) > surface.gluing[(t, e)]:
            continue
        if placed_match(t, e):
            continue
        label += 1
        labels[(t, e)] = label
        labels[surface.gluing[(t, e)]] = label
    for (t, e), num in sorted(labels.items()):
        a = pts[t][e]
        b = pts[t][(e + 1) % 3]
        mx, my = (a[0] + b[0]) / 2, (a[1] + b[1]) / 2
        lines.append(
            f'<line x1="{sx(a[0]):.12f}" y1="{sy(a[1]):.12f}" '
            f'x2="{sx(b[0]):.12f}" y2="{sy(b[1]):.12f}" stroke="#333333" '
            'stroke-width="1.4"/>')
        lines.append(
            f'<text x="{sx(mx):.12f}" y="{sy(my):.12f}" font-size="11" '
            f'fill="#aa2222" text-anchor="middle">{num}</text>')

    seen_dots = set()
    for t in sorted(pts):
        for i in range(3):
            lab = surface.labels[t][i]
            if lab not in (BLACK, WHITE):
                continue
            key = pts[t][i]
            if key in seen_dots:
                continue
            seen_dots.add(key)
            cx, cy = sx(key[0]), sy(key[1])
            if lab == BLACK:
                lines.append(f'<circle cx="{cx:.12f}" cy="{cy:.12f}" '
                             'r="3.4" fill="black"/>')
            else:
                lines.append(f'<circle cx="{cx:.12f}" cy="{cy:.12f}" '
                             'r="3.4" fill="white" stroke="black" '
                             'stroke-width="1.1"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
