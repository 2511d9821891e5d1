"""Polygonal model of the Liouville class.

The contact form restricted to each torus fiber gives a covector; as the
fiber moves once around the base circle these covectors trace a path.
Here that path is the polygon whose corner in chart ``i`` is the covector
``(a_i, a_{i-1})``, i.e. it pairs to ``a_i`` with the ray of ``D_i`` and
to ``a_{i-1}`` with the ray of ``D_{i-1}``.  Segment ``i`` joins corner
``i`` to corner ``i+1`` and lies on the line ``<., ray of D_i> = a_i``.

Covectors change chart by the transposed gluing matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from tropsh.lattice import mat_apply, mat_inverse, to_scalar, wedge
from tropsh.manifold import (
    ORIGIN,
    TropManifold,
    TropPoint,
    normalize,
    point_key,
)


class OriginHasNoOrbit(ValueError):
    pass


class SlopeOnSpectrum(ValueError):
    pass


class BadAmpleData(ValueError):
    pass


@dataclass(frozen=True)
class AmpleData:
    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Sequence):
        coeffs = tuple(to_scalar(c) for c in coefficients)
        if not coeffs:
            raise BadAmpleData("no coefficients")
        if any(c <= 0 for c in coeffs):
            raise BadAmpleData("all ample coefficients must be strictly positive")
        object.__setattr__(self, "coefficients", coeffs)

    def __len__(self) -> int:
        return len(self.coefficients)

    def coeff(self, i: int) -> Fraction:
        return self.coefficients[(i - 1) % len(self.coefficients)]


Covector = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class LiouvillePath:
    manifold: TropManifold
    ample: AmpleData
    corners: tuple[Covector, ...]
    reversed: bool = False

    def corner(self, i: int) -> Covector:
        """Corner covector in chart ``i`` coordinates."""
        return self.corners[(i - 1) % len(self.corners)]

    def reverse(self) -> LiouvillePath:
        return LiouvillePath(self.manifold, self.ample, self.corners, not self.reversed)


@dataclass
class SegmentReport:
    index: int
    start: Covector
    displacement: Covector
    wedge: Fraction
    ok: bool


@dataclass
class CheckReport:
    ok: bool
    items: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def covector_to_prev_chart(m: TropManifold, i: int, phi: Covector) -> Covector:
    """Express a chart ``i+1`` covector in chart ``i`` (``M_i^T``)."""
    return mat_apply(m.transition(i).transpose(), phi)


def covector_to_next_chart(m: TropManifold, i: int, phi: Covector) -> Covector:
    """Express a chart ``i-1`` covector in chart ``i`` (``M_{i-1}^{-T}``)."""
    return mat_apply(mat_inverse(m.transition(i - 1)).transpose(), phi)


def covector_transport(m: TropManifold, phi: Covector, steps_from: int, chart: int) -> Covector:
    """Carry a covector of chart ``chart + steps_from`` back into ``chart``.

    ``steps_from`` may be negative.  The route is the straight chart walk,
    never wrapping beyond what ``steps_from`` says.
    """
    if steps_from >= 0:
        for s in range(steps_from, 0, -1):
            phi = covector_to_prev_chart(m, chart + s - 1, phi)
    else:
        for s in range(steps_from, 0):
            phi = covector_to_next_chart(m, chart + s + 1, phi)
    return phi


def synthesize(m: TropManifold, a: AmpleData) -> LiouvillePath:
    if len(a) != m.n:
        raise BadAmpleData(f"need {m.n} ample coefficients, got {len(a)}")
    corners = tuple((a.coeff(i), a.coeff(i - 1)) for i in range(1, m.n + 1))
    return LiouvillePath(m, a, corners)


def developed_corner(path: LiouvillePath, chart: int, steps: int) -> Covector:
    """Corner ``chart + steps`` developed into ``chart`` along the chart walk."""
    return covector_transport(path.manifold, path.corner(chart + steps), steps, chart)


def segments(path: LiouvillePath):
    """Yield ``(chart, start, end)`` covectors in chart coordinates.

    Forward segment ``i`` runs from corner ``i`` to corner ``i+1``; the
    reversed path runs the same segments backwards.
    """
    m = path.manifold
    for i in range(1, m.n + 1):
        p = path.corner(i)
        q = developed_corner(path, i, 1)
        if path.reversed:
            yield i, q, p
        else:
            yield i, p, q


def check_contact(path: LiouvillePath) -> CheckReport:
    items = []
    for i, start, end in segments(path):
        delta = (end[0] - start[0], end[1] - start[1])
        w = Fraction(wedge(start, delta))
        items.append(SegmentReport(i, start, delta, w, w < 0))
    return CheckReport(all(s.ok for s in items), items)


@dataclass
class CornerReport:
    index: int
    incoming: Covector
    outgoing: Covector
    wedge: Fraction
    ok: bool


def check_convex(path: LiouvillePath) -> CheckReport:
    """Consecutive segment displacements must keep turning clockwise."""
    items = []
    for i in range(1, path.manifold.n + 1):
        prev = developed_corner(path, i, -1)
        here = path.corner(i)
        nxt = developed_corner(path, i, 1)
        if path.reversed:
            prev, nxt = nxt, prev
        d1 = (here[0] - prev[0], here[1] - prev[1])
        d2 = (nxt[0] - here[0], nxt[1] - here[1])
        w = Fraction(wedge(d1, d2))
        items.append(CornerReport(i, d1, d2, w, w < 0))
    return CheckReport(all(c.ok for c in items), items)


def pairing(phi: Covector, v) -> Fraction:
    x, y = (v.a, v.b) if hasattr(v, "a") else v
    return phi[0] * x + phi[1] * y


def orbit_length(path: LiouvillePath, p: TropPoint) -> Fraction:
    """Action of the orbit torus at ``p``: the corner pairing in p's cone."""
    q = normalize(path.manifold, p)
    if q.is_origin():
        raise OriginHasNoOrbit("the origin indexes the interior generator")
    return pairing(path.corner(q.chart), q.coords)


def max_corner_pairing(path: LiouvillePath, p: TropPoint) -> Fraction:
    """Max of ``<corner, p>`` over all corners developed into p's chart.

    Corners are developed both ways around, at most one full turn, which
    is the discrete counterpart of maximizing along the whole path.
    """
    q = normalize(path.manifold, p)
    n = path.manifold.n
    return max(
        pairing(developed_corner(path, q.chart, s), q.coords)
        for s in range(-(n - 1), n)
    )


def theta_below_slope(path: LiouvillePath, slope) -> list[TropPoint]:
    """Integral points whose orbit length is below ``slope``, plus the origin."""
    slope = to_scalar(slope)
    if slope <= 0:
        raise ValueError("slope must be positive")
    m = path.manifold
    amin = min(path.ample.coefficients)
    bound = int(slope // amin) + 1
    out = [ORIGIN]
    for c in range(1, m.n + 1):
        for a in range(1, bound + 1):
            for b in range(0, bound + 1):
                p = TropPoint(c, (a, b))
                length = orbit_length(path, p)
                if length == slope:
                    raise SlopeOnSpectrum(f"slope {slope} is the length of {p}")
                if length < slope:
                    out.append(p)
    return sorted(out, key=point_key)


def action_spectrum(path: LiouvillePath, slope) -> list[Fraction]:
    """Distinct orbit lengths up to and including ``slope``."""
    slope = to_scalar(slope)
    amin = min(path.ample.coefficients)
    bound = int(slope // amin) + 1
    lengths = set()
    for c in range(1, path.manifold.n + 1):
        for a in range(1, bound + 1):
            for b in range(0, bound + 1):
                length = orbit_length(path, TropPoint(c, (a, b)))
                if length <= slope:
                    lengths.add(length)
    return sorted(lengths)


def boundary_degrees(m: TropManifold, a: AmpleData) -> list[Fraction]:
    """``A . D_i`` for the divisor ``A = sum a_i D_i``."""
    out = []
    for i in range(1, m.n + 1):
        out.append(a.coeff(i - 1) + m.boundary.k(i) * a.coeff(i) + a.coeff(i + 1))
    return out

