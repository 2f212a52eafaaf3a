"""Deterministic hand-written SVG for flowers and H step graphs."""
from __future__ import annotations

import math
from typing import Iterable

from .flower import Flower
from .iet import HGraph


def _n(v: float) -> str:
    return f"{float(v):.12g}"


def _polar(cx: float, cy: float, r: float, x) -> tuple[str, str]:
    t = 2 * math.pi * float(x)
    return _n(cx + r * math.cos(t)), _n(cy - r * math.sin(t))


def flower_svg(F: Flower, points: Iterable = (), size: int = 400) -> str:
    """Petals as thick arcs on the unit circle, antipodal copies thin.

    ``points`` are drawn as dots and their antipodes as crosses.
    """
    c = size / 2
    r = size * 0.38
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<circle cx="{_n(c)}" cy="{_n(c)}" r="{_n(r)}" fill="none" stroke="#bbbbbb" stroke-width="1"/>',
    ]
    for style, shift, width in (("#e0a040", 0.5, 4), ("#204080", 0, 10)):
        for p in F.petals:
            x0, y0 = _polar(c, c, r, float(p.left) + shift)
            x1, y1 = _polar(c, c, r, float(p.right) + shift)
            large = 1 if float(p.length) > 0.5 else 0
            out.append(
                f'<path d="M {x0} {y0} A {_n(r)} {_n(r)} 0 {large} 0 {x1} {y1}" fill="none" '
                f'stroke="{style}" stroke-width="{width}"/>'
            )
    for x in points:
        px, py = _polar(c, c, r, x)
        out.append(f'<circle cx="{px}" cy="{py}" r="4" fill="#c02020"/>')
        qx, qy = (float(v) for v in _polar(c, c, r, float(x) + 0.5))
        out.append(
            f'<path d="M {_n(qx - 4)} {_n(qy - 4)} L {_n(qx + 4)} {_n(qy + 4)} M {_n(qx - 4)} {_n(qy + 4)} '
            f'L {_n(qx + 4)} {_n(qy - 4)}" stroke="#808080" stroke-width="1.5"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def h_graph_svg(graph: HGraph, size: int = 400) -> str:
    """Plateaus of H as horizontal segments over [0, 1), samples as dots."""
    pad = size * 0.08
    span = size - 2 * pad

    def sx(x) -> str:
        return _n(pad + span * float(x))

    def sy(y) -> str:
        return _n(size - pad - span * float(y))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<rect x="{_n(pad)}" y="{_n(pad)}" width="{_n(span)}" height="{_n(span)}" fill="none" stroke="#bbbbbb"/>',
    ]
    for p in graph.plateaus:
        out.append(
            f'<line x1="{sx(p.start)}" y1="{sy(p.value)}" x2="{sx(p.end)}" y2="{sy(p.value)}" '
            f'stroke="#204080" stroke-width="3"/>'
        )
        out.append(f'<circle cx="{sx(p.start)}" cy="{sy(p.value)}" r="3" fill="#204080"/>')
    for x, y in graph.samples:
        out.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="1.5" fill="#c02020"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
