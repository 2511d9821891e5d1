"""The integral affine manifold glued from one quadrant per node.

Charts are numbered 1..n.  Chart ``i`` is the cone spanned by
``Gamma_z_i`` (the ray of divisor ``D_i``) and ``Gamma_w_i`` (the ray of
``D_{i-1}``).  Chart ``i`` and chart ``i+1`` overlap along the ray of
``D_i``, and coordinates change by ``[[0, -1], [1, -k_i]]``.

"Counterclockwise" below means increasing chart index.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from tropsh.lattice import (
    Mat2Z,
    Vec2Z,
    integer_kernel,
    mat_apply,
    mat_inverse,
    mat_mul,
    to_scalar,
)

logger = logging.getLogger(__name__)

CCW = "counterclockwise"
CW = "clockwise"


class BadInput(ValueError):
    pass


class NegativeCoords(ValueError):
    pass


class NotLinear(ValueError):
    pass


@dataclass(frozen=True)
class BoundaryData:
    n: int
    self_intersections: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "self_intersections", tuple(int(k) for k in self.self_intersections))
        if self.n < 1:
            raise BadInput("need at least one boundary component")
        if len(self.self_intersections) != self.n:
            raise BadInput(
                f"expected {self.n} self-intersections, got {len(self.self_intersections)}"
            )

    @classmethod
    def from_ks(cls, ks: Sequence[int]) -> BoundaryData:
        return cls(len(ks), tuple(ks))

    def k(self, i: int) -> int:
        """Self-intersection of ``D_i``, index taken mod n (1-based)."""
        return self.self_intersections[(i - 1) % self.n]


@dataclass(frozen=True, order=True)
class TropPoint:
    """A point of the manifold given in one chart's cone coordinates."""

    chart: int
    coords: tuple[Fraction, Fraction]

    def __init__(self, chart: int, coords):
        a, b = coords
        object.__setattr__(self, "chart", int(chart))
        object.__setattr__(self, "coords", (to_scalar(a), to_scalar(b)))

    @property
    def a(self) -> Fraction:
        return self.coords[0]

    @property
    def b(self) -> Fraction:
        return self.coords[1]

    def is_origin(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def vector(self) -> Vec2Z:
        if not self.is_integral():
            raise ValueError(f"{self} is not an integral point")
        return Vec2Z(int(self.a), int(self.b))

    def scaled(self, r) -> TropPoint:
        r = to_scalar(r)
        return TropPoint(self.chart, (r * self.a, r * self.b))

    def __repr__(self) -> str:
        return f"TropPoint({self.chart}, ({self.a}, {self.b}))"


ORIGIN = TropPoint(1, (0, 0))


@dataclass(frozen=True)
class TangentVector:
    chart: int
    vec: Vec2Z


@dataclass(frozen=True)
class LinearFunction:
    """Values on the primitive rays: ``values[j-1] = f(ray of D_j)``."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def alpha(self, j: int) -> int:
        return self.values[(j - 1) % len(self.values)]


@dataclass(frozen=True)
class TropManifold:
    boundary: BoundaryData
    transitions: tuple[Mat2Z, ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.boundary.n

    def chart(self, i: int) -> int:
        """Reduce a chart index into 1..n."""
        return (i - 1) % self.n + 1

    def transition(self, i: int) -> Mat2Z:
        """Coordinate change from chart ``i`` to chart ``i+1``."""
        return self.transitions[(i - 1) % self.n]

    def ray_vector(self, j: int, chart: int) -> Vec2Z:
        """Primitive vector of the ray of ``D_j`` in a chart that contains it."""
        j, chart = self.chart(j), self.chart(chart)
        if chart == j:
            return Vec2Z(1, 0)
        if chart == self.chart(j + 1):
            return Vec2Z(0, 1)
        raise ValueError(f"ray of D_{j} is not a boundary ray of chart {chart}")


def gluing_matrix(k: int) -> Mat2Z:
    return Mat2Z(0, -1, 1, -k)


def build(data: BoundaryData) -> TropManifold:
    if not isinstance(data, BoundaryData):
        raise BadInput("expected BoundaryData")
    transitions = tuple(gluing_matrix(k) for k in data.self_intersections)
    return TropManifold(data, transitions)


def from_ks(ks: Sequence[int]) -> TropManifold:
    return build(BoundaryData.from_ks(ks))


def monodromy(m: TropManifold) -> Mat2Z:
    """``M_n ... M_1``: a chart-1 vector carried once around, back to chart 1."""
    result = Mat2Z.identity()
    for t in m.transitions:
        result = mat_mul(t, result)
    return result


def transport_matrix(m: TropManifold, from_chart: int, to_chart: int,
                     direction: str = CCW, turns: int = 0) -> Mat2Z:
    """Matrix carrying chart ``from_chart`` coordinates to ``to_chart``.

    ``turns`` extra full loops are added in the chosen direction.
    """
    from_chart, to_chart = m.chart(from_chart), m.chart(to_chart)
    result = Mat2Z.identity()
    if direction == CCW:
        steps = (to_chart - from_chart) % m.n + turns * m.n
        c = from_chart
        for _ in range(steps):
            result = mat_mul(m.transition(c), result)
            c += 1
    elif direction == CW:
        steps = (from_chart - to_chart) % m.n + turns * m.n
        c = from_chart
        for _ in range(steps):
            result = mat_mul(mat_inverse(m.transition(c - 1)), result)
            c -= 1
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return result


def transport_steps(m: TropManifold, from_chart: int, steps: int) -> Mat2Z:
    """Transport by a signed number of chart steps (positive = counterclockwise)."""
    result = Mat2Z.identity()
    c = m.chart(from_chart)
    if steps >= 0:
        for _ in range(steps):
            result = mat_mul(m.transition(c), result)
            c += 1
    else:
        for _ in range(-steps):
            result = mat_mul(mat_inverse(m.transition(c - 1)), result)
            c -= 1
    return result


def transport_vector(m: TropManifold, v: TangentVector, to_chart: int,
                     direction: str = CCW, turns: int = 0) -> TangentVector:
    mat = transport_matrix(m, v.chart, to_chart, direction, turns)
    return TangentVector(m.chart(to_chart), mat_apply(mat, v.vec))


def normalize(m: TropManifold, p: TropPoint) -> TropPoint:
    """Canonical representative: rays live in the chart where they are the first axis."""
    a, b = p.coords
    if a < 0 or b < 0:
        raise NegativeCoords(f"{p} has negative cone coordinates")
    if a == 0 and b == 0:
        return ORIGIN
    c = m.chart(p.chart)
    if a == 0:
        return TropPoint(m.chart(c - 1), (b, 0))
    return TropPoint(c, (a, b))


def ray_index(m: TropManifold, p: TropPoint) -> int | None:
    """Index ``j`` if ``p`` lies on the ray of ``D_j``, else None."""
    q = normalize(m, p)
    if q.is_origin() or q.b != 0:
        return None
    return q.chart


def in_closed_cone(m: TropManifold, p: TropPoint, chart: int) -> TropPoint | None:
    """``p`` expressed in ``chart`` if it lies in that closed cone."""
    q = normalize(m, p)
    chart = m.chart(chart)
    if q.is_origin():
        return TropPoint(chart, (0, 0))
    if q.chart == chart:
        return q
    if q.b == 0 and m.chart(q.chart + 1) == chart:
        return TropPoint(chart, (0, q.a))
    return None


def charts_containing(m: TropManifold, p: TropPoint) -> list[int]:
    return [c for c in range(1, m.n + 1) if in_closed_cone(m, p, c) is not None]


def integral_points(m: TropManifold, bound: int) -> list[TropPoint]:
    if bound < 0:
        raise BadInput("bound must be non-negative")
    pts = [ORIGIN]
    for c in range(1, m.n + 1):
        for a in range(1, bound + 1):
            pts.append(TropPoint(c, (a, 0)))
            for b in range(1, bound + 1):
                pts.append(TropPoint(c, (a, b)))
    return sorted(pts, key=point_key)


def point_key(p: TropPoint):
    return (p.chart, p.a, p.b)


def cyclic_system(m: TropManifold) -> list[list[int]]:
    """Rows ``alpha_{i-1} + k_i alpha_i + alpha_{i+1} = 0``, one per divisor."""
    n = m.n
    rows = []
    for i in range(n):
        row = [0] * n
        row[(i - 1) % n] += 1
        row[i] += m.boundary.self_intersections[i]
        row[(i + 1) % n] += 1
        rows.append(row)
    return rows


def linear_function_basis(m: TropManifold) -> list[LinearFunction]:
    return [LinearFunction(tuple(v)) for v in integer_kernel(cyclic_system(m))]


def is_linear(m: TropManifold, f: LinearFunction) -> bool:
    if len(f.values) != m.n:
        return False
    for i in range(1, m.n + 1):
        if f.alpha(i - 1) + m.boundary.k(i) * f.alpha(i) + f.alpha(i + 1) != 0:
            return False
    return True


def evaluate(f: LinearFunction, p: TropPoint, m: TropManifold | None = None) -> Fraction:
    """``a * alpha_i + b * alpha_{i-1}`` for ``p = (chart i, (a, b))``."""
    if m is not None and not is_linear(m, f):
        raise NotLinear(f"{f} violates the orthogonality condition")
    i = p.chart
    return p.a * f.alpha(i) + p.b * f.alpha(i - 1)


def points_of(m: TropManifold, items: Iterable[TropPoint]) -> list[TropPoint]:
    return sorted({normalize(m, p) for p in items}, key=point_key)


def canonical_frame(m: TropManifold, p: TropPoint, vec):
    """Move a tangent vector at ``p`` (in p's chart) to p's canonical chart.

    Only points of the form ``(0, b)`` change chart: they sit on the ray of
    ``D_{c-1}`` and are re-expressed as ``(b, 0)`` in chart ``c-1``.
    """
    if p.a == 0 and p.b > 0:
        inv = mat_inverse(m.transition(p.chart - 1))
        return normalize(m, p), mat_apply(inv, vec)
    return normalize(m, p), vec
