"""Broken line diagrams: validation, homology class and localization.

A diagram is a tree of straight segments between vertices, with legs
attached to vertices.  An *input* leg is an infinite straight ray that
ends up parallel to the ray of its asymptotic class; an *output* leg runs
radially from its vertex into the origin.  Straightness is with respect to
the integral affine structure, so segments bend (in chart coordinates)
whenever they cross the ray of a divisor.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from tropsh.lattice import Vec2Z, mat_apply, mat_inverse, primitive_part, wedge
from tropsh.liouville import LiouvillePath, pairing
from tropsh.manifold import (
    TropManifold,
    TropPoint,
    canonical_frame,
    charts_containing,
    in_closed_cone,
    normalize,
    transport_steps,
)

logger = logging.getLogger(__name__)

INPUT = "input"
OUTPUT = "output"

# straight lines cross finitely many rays; anything longer is a runaway trace
MAX_CROSSINGS = 512


class MalformedDiagram(ValueError):
    pass


class NotValidated(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    chart: int
    tangent: Vec2Z
    weight: int = 1
    charts: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Leg:
    vertex: int
    chart: int
    cls: Vec2Z
    kind: str


@dataclass(frozen=True)
class BrokenLineDiagram:
    vertices: tuple[TropPoint, ...]
    edges: tuple[Edge, ...] = ()
    legs: tuple[Leg, ...] = ()


# -- tracing straight lines through the charts ------------------------------


@dataclass(frozen=True)
class Piece:
    """Part of a straight line inside one chart; ``end`` is None if infinite."""

    chart: int
    start: tuple[Fraction, Fraction]
    end: tuple[Fraction, Fraction] | None
    direction: Vec2Z


@dataclass(frozen=True)
class Crossing:
    ray: int
    chart_from: int
    chart_to: int
    point: TropPoint
    before: Vec2Z  # direction in chart_from
    after: Vec2Z  # direction in chart_to
    at_start: bool


@dataclass
class Trace:
    pieces: list[Piece] = field(default_factory=list)
    crossings: list[Crossing] = field(default_factory=list)
    outcome: str = ""  # "target" | "infinite" | "origin" | "missed" | "runaway"
    final_chart: int = 0
    final_position: tuple[Fraction, Fraction] | None = None
    final_direction: Vec2Z | None = None


def _hit_parameter(pos, d, target):
    """``t > 0`` with ``pos + t d == target``, or None."""
    dx, dy = target[0] - pos[0], target[1] - pos[1]
    if d.a != 0:
        t = Fraction(dx) / d.a
    elif d.b != 0:
        t = Fraction(dy) / d.b
    else:
        return None
    if t <= 0 or dx != t * d.a or dy != t * d.b:
        return None
    return t


def trace_line(m: TropManifold, chart: int, pos, direction: Vec2Z,
               target: TropPoint | None = None) -> Trace:
    """Follow the straight line from ``pos`` (chart coordinates) along ``direction``.

    Stops at ``target`` if given, at the origin, or runs to infinity.
    """
    chart = m.chart(chart)
    x, y = Fraction(pos[0]), Fraction(pos[1])
    d = direction
    out = Trace()
    first = True
    for _ in range(MAX_CROSSINGS):
        exits = []
        if d.a < 0:
            exits.append((-x / d.a, "a"))
        if d.b < 0:
            exits.append((-y / d.b, "b"))
        t_exit = min(t for t, _ in exits) if exits else None

        if target is not None:
            local = in_closed_cone(m, target, chart)
            candidates = [local] if local is not None else []
            if m.n == 1 and local is not None and local.b == 0:
                # a ray point of the one-chart manifold also reads (0, r)
                candidates.append(TropPoint(chart, (0, local.a)))
            for cand in candidates:
                t = _hit_parameter((x, y), d, cand.coords)
                if t is not None and (t_exit is None or t <= t_exit):
                    end = cand.coords
                    out.pieces.append(Piece(chart, (x, y), end, d))
                    out.outcome = "target"
                    out.final_chart, out.final_position, out.final_direction = chart, end, d
                    return out

        if t_exit is None:
            out.pieces.append(Piece(chart, (x, y), None, d))
            out.outcome = "missed" if target is not None else "infinite"
            out.final_chart, out.final_position, out.final_direction = chart, (x, y), d
            return out

        kinds = {k for t, k in exits if t == t_exit}
        px, py = x + t_exit * d.a, y + t_exit * d.b
        if t_exit > 0:
            out.pieces.append(Piece(chart, (x, y), (px, py), d))
        if kinds == {"a", "b"}:
            out.outcome = "origin"
            out.final_chart, out.final_position, out.final_direction = chart, (px, py), d
            return out
        if "b" in kinds:
            # leave through the ray of D_chart into chart + 1
            mat = m.transition(chart)
            ray, new_chart = chart, m.chart(chart + 1)
            new_pos = (Fraction(0), px)
        else:
            # leave through the ray of D_{chart-1} into chart - 1
            mat = mat_inverse(m.transition(chart - 1))
            ray, new_chart = m.chart(chart - 1), m.chart(chart - 1)
            new_pos = (py, Fraction(0))
        new_d = mat_apply(mat, d)
        out.crossings.append(Crossing(
            ray, chart, new_chart, normalize(m, TropPoint(new_chart, new_pos)),
            d, new_d, first and t_exit == 0,
        ))
        chart, (x, y), d = new_chart, new_pos, new_d
        first = False
    out.outcome = "runaway"
    return out


# -- validation --------------------------------------------------------------


@dataclass
class Check:
    name: str
    ok: bool = True
    messages: list[str] = field(default_factory=list)
    skipped: bool = False

    def fail(self, msg: str) -> None:
        self.ok = False
        self.messages.append(msg)


@dataclass
class ValidationReport:
    checks: list[Check]
    balance: dict[int, Vec2Z] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self) -> bool:
        return self.ok

    def check(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)


@dataclass
class DiagramGeometry:
    """Traces and away-from-vertex vectors, shared by the diagram operations."""

    edge_traces: list[Trace]
    leg_traces: dict[int, Trace]
    leg_tangents: dict[int, Vec2Z]
    # vertex -> list of (vector in the vertex's canonical chart, label)
    outgoing: dict[int, list[tuple[Vec2Z, str]]]
    canonical: list[TropPoint]


def check_well_formed(m: TropManifold, d: BrokenLineDiagram) -> None:
    nv = len(d.vertices)
    for i, v in enumerate(d.vertices):
        if v.a < 0 or v.b < 0:
            raise MalformedDiagram(f"vertex {i} has negative coordinates")
        if v.is_origin():
            raise MalformedDiagram(f"vertex {i} is the origin")
    for k, e in enumerate(d.edges):
        if not (0 <= e.source < nv and 0 <= e.target < nv):
            raise MalformedDiagram(f"edge {k} refers to a missing vertex")
        if e.source == e.target:
            raise MalformedDiagram(f"edge {k} is a loop")
        if e.tangent.is_zero() or primitive_part(e.tangent)[1] != 1:
            raise MalformedDiagram(f"edge {k} tangent {e.tangent.as_tuple()} is not primitive")
        if e.weight < 1:
            raise MalformedDiagram(f"edge {k} weight {e.weight} is not positive")
    for k, leg in enumerate(d.legs):
        if not 0 <= leg.vertex < nv:
            raise MalformedDiagram(f"leg {k} refers to a missing vertex")
        if leg.kind not in (INPUT, OUTPUT):
            raise MalformedDiagram(f"leg {k} has unknown kind {leg.kind!r}")
        if leg.cls.is_zero():
            raise MalformedDiagram(f"leg {k} has zero class")
    if nv and len(d.edges) != nv - 1:
        raise MalformedDiagram("the diagram is not a tree (edge count)")
    parent = list(range(nv))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for e in d.edges:
        ra, rb = find(e.source), find(e.target)
        if ra == rb:
            raise MalformedDiagram("the diagram contains a cycle")
        parent[ra] = rb


def _input_leg_route(m: TropManifold, vertex: TropPoint, leg: Leg):
    """Find the tangent at ``vertex`` whose straight ray ends in the leg's class."""
    cls_point = TropPoint(leg.chart, (leg.cls.a, leg.cls.b))
    if leg.cls.a < 0 or leg.cls.b < 0:
        return None, None
    goal = normalize(m, cls_point)
    base = (vertex.chart - m.chart(leg.chart)) % m.n
    steps = sorted({base + j * m.n for j in range(-2, 3)}, key=lambda s: (abs(s), s < 0))
    for s in steps:
        t = mat_apply(transport_steps(m, leg.chart, s), leg.cls)
        tr = trace_line(m, vertex.chart, vertex.coords, t)
        if tr.outcome != "infinite":
            continue
        end = TropPoint(tr.final_chart, (tr.final_direction.a, tr.final_direction.b))
        if normalize(m, end) == goal:
            return t, tr
    return None, None


def diagram_geometry(m: TropManifold, d: BrokenLineDiagram, sector: Check, legs: Check) -> DiagramGeometry:
    canon = [normalize(m, v) for v in d.vertices]
    outgoing: dict[int, list[tuple[Vec2Z, str]]] = {i: [] for i in range(len(canon))}
    edge_traces = []
    for k, e in enumerate(d.edges):
        src = in_closed_cone(m, canon[e.source], e.chart)
        if src is None:
            sector.fail(f"edge {k}: vertex {e.source} is not in chart {m.chart(e.chart)}")
            edge_traces.append(Trace(outcome="missed"))
            continue
        w = e.weight
        _, vec = canonical_frame(m, src, e.tangent * w)
        outgoing[e.source].append((vec, f"edge {k}"))
        tr = trace_line(m, e.chart, src.coords, e.tangent, target=canon[e.target])
        edge_traces.append(tr)
        if tr.outcome != "target":
            sector.fail(f"edge {k}: straight line from vertex {e.source} "
                        f"does not reach vertex {e.target} ({tr.outcome})")
            continue
        if e.charts is not None:
            visited = tuple(p.chart for p in tr.pieces)
            if tuple(m.chart(c) for c in e.charts) != visited:
                sector.fail(f"edge {k}: passes through charts {visited}, declared {e.charts}")
        arrival = TropPoint(tr.final_chart, tr.final_position)
        _, back = canonical_frame(m, arrival, -(tr.final_direction * w))
        outgoing[e.target].append((back, f"edge {k}"))

    leg_traces: dict[int, Trace] = {}
    leg_tangents: dict[int, Vec2Z] = {}
    for k, leg in enumerate(d.legs):
        v = canon[leg.vertex]
        if leg.kind == OUTPUT:
            if leg.cls.a < 0 or leg.cls.b < 0:
                legs.fail(f"leg {k}: class {leg.cls.as_tuple()} is not in chart {leg.chart}")
                continue
            cls = normalize(m, TropPoint(leg.chart, (leg.cls.a, leg.cls.b)))
            if cls.chart != v.chart or wedge(cls.coords, v.coords) != 0:
                legs.fail(f"leg {k}: output class is not along the ray through vertex {leg.vertex}")
                continue
            rho = Vec2Z(int(cls.a), int(cls.b))
            outgoing[leg.vertex].append((-rho, f"leg {k}"))
            leg_tangents[k] = -rho
        else:
            t, tr = _input_leg_route(m, v, leg)
            if t is None:
                legs.fail(f"leg {k}: no straight ray from vertex {leg.vertex} "
                          f"is asymptotic to class {leg.cls.as_tuple()} in chart {leg.chart}")
                continue
            leg_traces[k] = tr
            leg_tangents[k] = t
            outgoing[leg.vertex].append((t, f"leg {k}"))
    return DiagramGeometry(edge_traces, leg_traces, leg_tangents, outgoing, canon)


def _crossing_jump(path: LiouvillePath, c: Crossing) -> Fraction:
    before = pairing(path.corner(c.chart_from), c.before)
    after = pairing(path.corner(c.chart_to), c.after)
    return after - before


def validate(m: TropManifold, path: LiouvillePath | None, d: BrokenLineDiagram) -> ValidationReport:
    check_well_formed(m, d)
    sector = Check("sector")
    balancing = Check("balancing")
    legs = Check("legs")
    mono = Check("monotonicity")
    geo = diagram_geometry(m, d, sector, legs)

    report = ValidationReport([sector, balancing, legs, mono])
    for i, vecs in geo.outgoing.items():
        total = Vec2Z(0, 0)
        for v, _ in vecs:
            total = total + v
        report.balance[i] = total
        if not total.is_zero():
            balancing.fail(f"vertex {i}: weighted tangents sum to {total.as_tuple()}")

    if path is None:
        mono.skipped = True
        return report
    for k, tr in enumerate(geo.edge_traces):
        for piece in tr.pieces:
            if wedge(piece.start, piece.direction) == 0:
                mono.fail(f"edge {k}: radial piece in chart {piece.chart}")
        for c in tr.crossings:
            if _crossing_jump(path, c) <= 0:
                mono.fail(f"edge {k}: action does not increase across the ray of D_{c.ray}")
    for k, tr in geo.leg_traces.items():
        for c in tr.crossings:
            if _crossing_jump(path, c) <= 0:
                mono.fail(f"leg {k}: action does not increase across the ray of D_{c.ray}")
    return report


def _require_valid(m: TropManifold, d: BrokenLineDiagram, path: LiouvillePath | None):
    sector, legs = Check("sector"), Check("legs")
    report = validate(m, path, d)
    if not report.ok:
        failed = [c.name for c in report.checks if not c.ok]
        raise NotValidated(f"diagram fails validation: {', '.join(failed)}")
    return diagram_geometry(m, d, sector, legs)


def _crossing_weights(m: TropManifold, d: BrokenLineDiagram, geo: DiagramGeometry) -> list[int]:
    coeffs = [0] * m.n
    weighted = [(tr, e.weight) for tr, e in zip(geo.edge_traces, d.edges)]
    weighted += [(tr, 1) for tr in geo.leg_traces.values()]
    for tr, w in weighted:
        for c in tr.crossings:
            if c.at_start:
                continue
            r = m.ray_vector(c.ray, c.chart_from)
            coeffs[c.ray - 1] += abs(wedge(r, c.before)) * w
    # vertices sitting on a ray: net flux into the far side
    for i, v in enumerate(geo.canonical):
        if v.b != 0:
            continue
        far = sum(vec.b for vec, _ in geo.outgoing[i] if vec.b < 0)
        coeffs[v.chart - 1] += abs(far)
    return coeffs


def homology_class(m: TropManifold, d: BrokenLineDiagram,
                   path: LiouvillePath | None = None) -> list[int]:
    """Coefficients of ``[D_1], ..., [D_n]`` read off from ray crossings."""
    geo = _require_valid(m, d, path)
    return _crossing_weights(m, d, geo)


def vertex_flux(m: TropManifold, d: BrokenLineDiagram, vertex: int) -> tuple[int, int]:
    """Crossing flux of a vertex on a ray, computed on the near and far side."""
    geo = _require_valid(m, d, None)
    v = geo.canonical[vertex]
    if v.b != 0:
        raise ValueError(f"vertex {vertex} is not on a ray")
    near = sum(vec.b for vec, _ in geo.outgoing[vertex] if vec.b > 0)
    far = sum(vec.b for vec, _ in geo.outgoing[vertex] if vec.b < 0)
    return abs(near), abs(far)


def _piece_charts(m: TropManifold, piece: Piece) -> set[int]:
    charts = {piece.chart}
    if piece.start[1] == 0 and piece.direction.b == 0:
        charts.add(m.chart(piece.chart + 1))
    if piece.start[0] == 0 and piece.direction.a == 0:
        charts.add(m.chart(piece.chart - 1))
    return charts


def is_localized(m: TropManifold, d: BrokenLineDiagram,
                 path: LiouvillePath | None = None) -> int | None:
    """Lowest chart whose closed cone contains the whole diagram, if any."""
    geo = _require_valid(m, d, path)
    traces = list(geo.edge_traces) + list(geo.leg_traces.values())
    if any(not c.at_start for tr in traces for c in tr.crossings):
        return None
    for i, v in enumerate(geo.canonical):
        if v.b == 0:
            sides = {vec.b > 0 for vec, _ in geo.outgoing[i] if vec.b != 0}
            if len(sides) > 1:
                return None
    allowed = set(range(1, m.n + 1))
    for v in geo.canonical:
        allowed &= set(charts_containing(m, v))
    for tr in traces:
        for piece in tr.pieces:
            allowed &= _piece_charts(m, piece)
    # a vertex on a ray whose pieces all leave to one side sits in that cone
    for i, v in enumerate(geo.canonical):
        if v.b == 0:
            sides = {vec.b > 0 for vec, _ in geo.outgoing[i] if vec.b != 0}
            if sides == {True}:
                allowed &= {v.chart}
            elif sides == {False}:
                allowed &= {m.chart(v.chart + 1)}
    return min(allowed) if allowed else None


def support_charts(m: TropManifold, d: BrokenLineDiagram) -> list[int]:
    """Charts met by the diagram (vertices and straight pieces)."""
    sector, legs = Check("sector"), Check("legs")
    check_well_formed(m, d)
    geo = diagram_geometry(m, d, sector, legs)
    seen = set()
    for v in geo.canonical:
        seen.add(v.chart)
    for tr in list(geo.edge_traces) + list(geo.leg_traces.values()):
        for piece in tr.pieces:
            seen.add(piece.chart)
    return sorted(seen)


def scaled(d: BrokenLineDiagram, k: int) -> BrokenLineDiagram:
    """Multiply every weight and leg class by ``k`` (vertices unchanged)."""
    return BrokenLineDiagram(
        d.vertices,
        tuple(Edge(e.source, e.target, e.chart, e.tangent, e.weight * k, e.charts) for e in d.edges),
        tuple(Leg(l.vertex, l.chart, l.cls * k, l.kind) for l in d.legs),
    )

