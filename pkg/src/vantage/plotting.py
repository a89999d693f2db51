"""Deterministic SVG emission: point configurations, bisector arrangements,
and log-compressed flanked layouts."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from vantage.enumeration import arrangement_cells_2d, bisector_lines
from vantage.geometry import CandidateSet, Point

WIDTH, HEIGHT = 640, 480
MARGIN = 40


def _fmt(x: float) -> str:
    return f"{x:.3f}"


class _Frame:
    def __init__(self, xs: Sequence[float], ys: Sequence[float]):
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        pad_x = (x1 - x0) * 0.1 or 1.0
        pad_y = (y1 - y0) * 0.1 or 1.0
        self.x0, self.x1 = x0 - pad_x, x1 + pad_x
        self.y0, self.y1 = y0 - pad_y, y1 + pad_y

    def map(self, x: float, y: float) -> Tuple[float, float]:
        u = MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * MARGIN)
        v = HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2 * MARGIN)
        return u, v


def _svg(body: List[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">')
    return "\n".join([head, '<rect width="100%" height="100%" fill="white"/>']
                     + body + ["</svg>"]) + "\n"


def _circle(frame: _Frame, x: float, y: float, r: float, fill: str) -> str:
    u, v = frame.map(x, y)
    return f'<circle cx="{_fmt(u)}" cy="{_fmt(v)}" r="{r}" fill="{fill}"/>'


def plot_points(groups: Sequence[Tuple[Sequence[Point], str, float]]) -> str:
    """Scatter plot; groups are (points, color, radius)."""
    xs = [float(p[0]) for pts, _, _ in groups for p in pts]
    ys = [float(p[1]) for pts, _, _ in groups for p in pts]
    frame = _Frame(xs, ys)
    body = []
    for pts, color, radius in groups:
        for p in pts:
            body.append(_circle(frame, float(p[0]), float(p[1]), radius, color))
    return _svg(body)


def plot_six_point() -> str:
    """Schematic of the six-point configuration: outer triangle in blue,
    near-midpoint points in green."""
    from vantage.witnesses import six_point_candidates

    C = six_point_candidates()
    outer = C.points[:3]
    inner = C.points[3:]
    return plot_points([(outer, "blue", 6.0), (inner, "green", 6.0)])


def plot_arrangement(C: CandidateSet) -> str:
    """Bisector arrangement of a planar candidate set: lines, candidates,
    and one sample dot per cell."""
    if C.dim != 2:
        raise ValueError("arrangement plots need dim 2")
    lines = bisector_lines(C)
    cells = arrangement_cells_2d(lines)
    xs = [float(p[0]) for p in C.points] + [float(c.sample[0]) for c in cells]
    ys = [float(p[1]) for p in C.points] + [float(c.sample[1]) for c in cells]
    frame = _Frame(xs, ys)
    body = []
    for a, b, c in lines:
        a, b, c = float(a), float(b), float(c)
        pts = []
        for X in (frame.x0, frame.x1):
            if b != 0:
                pts.append((X, -(c + a * X) / b))
        for Y in (frame.y0, frame.y1):
            if a != 0:
                pts.append((-(c + b * Y) / a, Y))
        seg = [(x, y) for x, y in pts
               if frame.x0 - 1e-9 <= x <= frame.x1 + 1e-9
               and frame.y0 - 1e-9 <= y <= frame.y1 + 1e-9]
        seg = sorted(set(seg))[:2]
        if len(seg) == 2:
            (x1, y1), (x2, y2) = seg
            u1, v1 = frame.map(x1, y1)
            u2, v2 = frame.map(x2, y2)
            body.append(f'<line x1="{_fmt(u1)}" y1="{_fmt(v1)}" x2="{_fmt(u2)}" '
                        f'y2="{_fmt(v2)}" stroke="gray" stroke-width="1"/>')
    for cell in cells:
        body.append(_circle(frame, float(cell.sample[0]), float(cell.sample[1]),
                            2.5, "#c0d0ff"))
    for p in C.points:
        body.append(_circle(frame, float(p[0]), float(p[1]), 5.0, "black"))
    return _svg(body)


def _log_compress(x: float, scale: float) -> float:
    return math.copysign(math.log10(1.0 + abs(x) / scale), x)


def plot_flanked(core: Sequence[Point], flank1: Sequence[Point],
                 flank2: Sequence[Point],
                 vantage: Optional[Sequence[Point]] = None) -> str:
    """Flanked configuration with log-compressed first coordinate, so the
    three widely separated clusters stay visible; vantage points in red."""
    vantage = vantage or []
    scale = max([abs(float(p[0])) for p in core] + [1.0])

    def tx(p: Point) -> Point:
        x = _log_compress(float(p[0]), scale)
        y = float(p[1]) if p.dim > 1 else 0.0
        return Point((Fraction(x).limit_denominator(10 ** 6),
                      Fraction(y).limit_denominator(10 ** 6)))

    groups = [
        ([tx(p) for p in core], "black", 5.0),
        ([tx(p) for p in flank1], "steelblue", 5.0),
        ([tx(p) for p in flank2], "seagreen", 5.0),
    ]
    if vantage:
        groups.append(([tx(p) for p in vantage], "red", 7.0))
    return plot_points(groups)
