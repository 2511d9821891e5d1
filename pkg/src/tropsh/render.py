"""SVG pictures of the developed manifold, diagrams and Liouville paths.

Charts are developed into the plane starting from chart 1 and the picture
is cut along the ray of ``D_n``.  Lattice coordinates are drawn on the
triangular lattice (``e2`` at 120 degrees), so the fan of the projective
plane shows up with equal angles.  Floating point appears only here, and
every number is printed with fixed precision so output is byte-stable.
"""

from __future__ import annotations

import math
from fractions import Fraction
from xml.sax.saxutils import escape

from tropsh.broken_lines import (
    BrokenLineDiagram,
    Check,
    INPUT,
    diagram_geometry,
    check_well_formed,
)
from tropsh.lattice import Mat2Z, mat_apply, mat_inverse, mat_mul
from tropsh.liouville import LiouvillePath
from tropsh.manifold import TropManifold, integral_points, normalize

SCALE = 40.0
LEG_LENGTH = 3
COS120, SIN120 = -0.5, math.sqrt(3) / 2


def development(m: TropManifold) -> list[Mat2Z]:
    """``G_i`` mapping chart ``i`` coordinates to chart 1 (cut along ``D_n``)."""
    mats = [Mat2Z.identity()]
    for i in range(1, m.n):
        mats.append(mat_mul(mats[-1], mat_inverse(m.transition(i))))
    return mats


def developed_rays(m: TropManifold) -> list[tuple[int, int]]:
    """Primitive vector of each ray ``D_j`` in developed coordinates.

    ``D_n`` is drawn on the chart-1 side of the cut.
    """
    dev = development(m)
    out = []
    for j in range(1, m.n + 1):
        if j == m.n:
            out.append(mat_apply(dev[0], (0, 1)))
        else:
            out.append(mat_apply(dev[j - 1], (1, 0)))
    return [tuple(v) for v in out]


def _embed(x, y) -> tuple[float, float]:
    px = float(x) + COS120 * float(y)
    py = SIN120 * float(y)
    return px, py


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


class _Canvas:
    def __init__(self, radius: float):
        self.r = radius
        self.items: list[str] = []

    def xy(self, x, y) -> tuple[str, str]:
        px, py = _embed(x, y)
        return _fmt(px * SCALE), _fmt(-py * SCALE)

    def line(self, p, q, cls: str, width: float = 1.0) -> None:
        x1, y1 = self.xy(*p)
        x2, y2 = self.xy(*q)
        self.items.append(
            f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
            f'stroke-width="{_fmt(width)}"/>'
        )

    def dot(self, p, cls: str, r: float = 2.0) -> None:
        x, y = self.xy(*p)
        self.items.append(f'<circle class="{cls}" cx="{x}" cy="{y}" r="{_fmt(r)}"/>')

    def text(self, p, label: str, cls: str = "label") -> None:
        x, y = self.xy(*p)
        self.items.append(f'<text class="{cls}" x="{x}" y="{y}">{escape(label)}</text>')

    def svg(self, title: str) -> str:
        half = self.r * SCALE
        view = f"{_fmt(-half)} {_fmt(-half)} {_fmt(2 * half)} {_fmt(2 * half)}"
        head = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'viewBox="{view}" width="{_fmt(2 * half)}" height="{_fmt(2 * half)}">',
            f"<title>{escape(title)}</title>",
            "<style>"
            ".ray{stroke:#444;fill:none}.cut{stroke:#444;stroke-dasharray:4 3;fill:none}"
            ".pt{fill:#999}.origin{fill:#000}.edge{stroke:#c22;fill:none}"
            ".leg-in{stroke:#26c;fill:none}.leg-out{stroke:#2a2;fill:none}"
            ".path{stroke:#a6a;fill:none}.vertex{fill:#c22}"
            ".label{font:10px sans-serif;fill:#222}.weight{font:9px sans-serif;fill:#c22}"
            "</style>",
        ]
        return "\n".join(head + self.items + ["</svg>", ""])


def _to_dev(dev: list[Mat2Z], m: TropManifold, chart: int, vec):
    return mat_apply(dev[m.chart(chart) - 1], vec)


def render_svg(m: TropManifold, d: BrokenLineDiagram | None = None,
               path: LiouvillePath | None = None, bound: int = 3) -> str:
    dev = development(m)
    radius = max(bound, 1) + 2.5
    canvas = _Canvas(radius)
    rays = developed_rays(m)
    reach = max(bound, 1) + 1.5
    for j, r in enumerate(rays, start=1):
        norm = max(abs(r[0]), abs(r[1]))
        tip = (r[0] * reach / norm, r[1] * reach / norm)
        canvas.line((0, 0), tip, "cut" if j == m.n else "ray")
        canvas.text(tip, f"D_{j}")
    if m.n > 1:
        # D_n also bounds chart n on the far side of the cut
        far = mat_apply(dev[m.n - 1], (1, 0))
        norm = max(abs(far[0]), abs(far[1]))
        canvas.line((0, 0), (far[0] * reach / norm, far[1] * reach / norm), "cut")

    for p in integral_points(m, bound):
        if p.is_origin():
            continue
        canvas.dot(_to_dev(dev, m, p.chart, p.coords), "pt", 1.5)
    canvas.dot((0, 0), "origin", 2.5)

    if path is not None:
        level = max(bound, 1) * min(path.ample.coefficients)
        for i in range(1, m.n + 1):
            p, q = _level_segment(path, i, level)
            canvas.line(_to_dev(dev, m, i, p), _to_dev(dev, m, i, q), "path", 1.0)

    if d is not None:
        _draw_diagram(canvas, dev, m, d)
    return canvas.svg(f"U^trop, n={m.n}, k={list(m.boundary.self_intersections)}")


def _level_segment(path: LiouvillePath, i: int, level: Fraction):
    """Where orbit length equals ``level`` inside chart ``i``: a straight segment."""
    a_i, a_prev = path.corner(i)
    return (level / a_i, 0), (0, level / a_prev)


def _draw_diagram(canvas: _Canvas, dev, m: TropManifold, d: BrokenLineDiagram) -> None:
    check_well_formed(m, d)
    geo = diagram_geometry(m, d, Check("sector"), Check("legs"))
    for k, (e, tr) in enumerate(zip(d.edges, geo.edge_traces)):
        for piece in tr.pieces:
            if piece.end is None:
                continue
            canvas.line(_to_dev(dev, m, piece.chart, piece.start),
                        _to_dev(dev, m, piece.chart, piece.end), "edge", 1.0 + 0.8 * e.weight)
        if tr.pieces and e.weight > 1:
            first = tr.pieces[0]
            mid = first.start if first.end is None else tuple(
                (u + v) / 2 for u, v in zip(first.start, first.end))
            canvas.text(_to_dev(dev, m, first.chart, mid), str(e.weight), "weight")
    for k, leg in enumerate(d.legs):
        v = geo.canonical[leg.vertex]
        if leg.kind == INPUT:
            tr = geo.leg_traces.get(k)
            if tr is None:
                continue
            for piece in tr.pieces:
                end = piece.end
                if end is None:
                    end = tuple(s + LEG_LENGTH * c for s, c in
                                zip(piece.start, (piece.direction.a, piece.direction.b)))
                canvas.line(_to_dev(dev, m, piece.chart, piece.start),
                            _to_dev(dev, m, piece.chart, end), "leg-in", 1.5)
            mult = _multiplicity(leg.cls)
            if mult > 1:
                canvas.text(_to_dev(dev, m, v.chart, v.coords), str(mult), "weight")
        else:
            canvas.line(_to_dev(dev, m, v.chart, v.coords), (0, 0), "leg-out", 1.5)
    for v in geo.canonical:
        canvas.dot(_to_dev(dev, m, v.chart, normalize(m, v).coords), "vertex", 3.0)


def _multiplicity(vec) -> int:
    return math.gcd(vec.a, vec.b)
