"""Exact arithmetic in the rings that are known explicitly.

* the vertex ring: theta functions indexed by integral points, where two
  thetas multiply by adding their points if they share a closed cone and
  otherwise multiply to zero;
* the monoid ring over certified classes of ``P``, truncated by ample
  degree;
* ``K[x, y][(xy - 1)^-1]`` with basis ``x^a u^c`` and ``y^b u^c``
  (``u = xy - 1``, ``b >= 1``);
* the Laurent monomial product of the torus.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from tropsh.homology import (
    ClassExpr,
    IntersectionLattice,
    PCertificate,
    ample_degree,
    verify_P_certificate,
)
from tropsh.lattice import to_scalar
from tropsh.liouville import AmpleData
from tropsh.manifold import (
    ORIGIN,
    TropManifold,
    TropPoint,
    in_closed_cone,
    normalize,
    point_key,
)


class UnsupportedBoundaryLength(ValueError):
    pass


class UncertifiedClass(ValueError):
    pass


def _clean(terms: Mapping) -> dict:
    return {k: Fraction(v) for k, v in terms.items() if v != 0}


# -- vertex ring -----------------------------------------------------------


@dataclass(frozen=True)
class VertexElement:
    terms: tuple[tuple[TropPoint, Fraction], ...]

    @classmethod
    def from_dict(cls, m: TropManifold, terms: Mapping[TropPoint, object]) -> VertexElement:
        acc: dict[TropPoint, Fraction] = defaultdict(Fraction)
        for p, c in terms.items():
            acc[normalize(m, p)] += to_scalar(c)
        clean = _clean(acc)
        return cls(tuple(sorted(clean.items(), key=lambda kv: point_key(kv[0]))))

    @classmethod
    def theta(cls, m: TropManifold, p: TropPoint, coeff=1) -> VertexElement:
        return cls.from_dict(m, {p: coeff})

    @classmethod
    def unit(cls) -> VertexElement:
        return cls(((ORIGIN, Fraction(1)),))

    def as_dict(self) -> dict[TropPoint, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms


def theta_product(m: TropManifold, p: TropPoint, q: TropPoint) -> TropPoint | None:
    """Point of ``theta_p * theta_q`` in the central fiber, or None for zero."""
    if m.n < 3:
        raise UnsupportedBoundaryLength("the vertex ring needs at least three components")
    p, q = normalize(m, p), normalize(m, q)
    if p.is_origin():
        return q
    if q.is_origin():
        return p
    for c in range(1, m.n + 1):
        pc, qc = in_closed_cone(m, p, c), in_closed_cone(m, q, c)
        if pc is not None and qc is not None:
            return normalize(m, TropPoint(c, (pc.a + qc.a, pc.b + qc.b)))
    return None


def vertex_mul(m: TropManifold, e1: VertexElement, e2: VertexElement) -> VertexElement:
    if m.n < 3:
        raise UnsupportedBoundaryLength("the vertex ring needs at least three components")
    acc: dict[TropPoint, Fraction] = defaultdict(Fraction)
    for p, x in e1.terms:
        for q, y in e2.terms:
            r = theta_product(m, p, q)
            if r is not None:
                acc[r] += x * y
    return VertexElement.from_dict(m, acc)


def vertex_add(m: TropManifold, e1: VertexElement, e2: VertexElement) -> VertexElement:
    acc: dict[TropPoint, Fraction] = defaultdict(Fraction)
    for p, x in e1.terms + e2.terms:
        acc[p] += x
    return VertexElement.from_dict(m, acc)


# -- monoid ring over P ----------------------------------------------------


@dataclass(frozen=True)
class MonoidRingElement:
    """``sum coeff * q^class`` over certified classes of P."""

    terms: tuple[tuple[ClassExpr, Fraction], ...]
    certificates: tuple[tuple[ClassExpr, PCertificate], ...] = ()

    @classmethod
    def build(cls, lattice: IntersectionLattice,
              terms: Iterable[tuple[ClassExpr, PCertificate, object]]) -> MonoidRingElement:
        acc: dict[ClassExpr, Fraction] = defaultdict(Fraction)
        certs: dict[ClassExpr, PCertificate] = {}
        for c, cert, coeff in terms:
            report = verify_P_certificate(lattice, c, cert)
            if not report.ok:
                raise UncertifiedClass(f"{c}: {'; '.join(report.messages)}")
            acc[c] += to_scalar(coeff)
            certs.setdefault(c, cert)
        return cls._from(acc, certs)

    @classmethod
    def _from(cls, acc, certs) -> MonoidRingElement:
        clean = _clean(acc)
        keys = sorted(clean)
        return cls(tuple((k, clean[k]) for k in keys), tuple((k, certs[k]) for k in keys))

    @classmethod
    def one(cls, n: int) -> MonoidRingElement:
        z = ClassExpr.zero(n)
        return cls(((z, Fraction(1)),), ((z, PCertificate(())),))

    def as_dict(self) -> dict[ClassExpr, Fraction]:
        return dict(self.terms)

    def certificate(self, c: ClassExpr) -> PCertificate:
        return dict(self.certificates)[c]


def monoid_mul(lattice: IntersectionLattice, m1: MonoidRingElement, m2: MonoidRingElement,
               a: AmpleData, trunc) -> MonoidRingElement:
    """Convolution ``q^c q^d = q^{c+d}``, dropping classes of ample degree above ``trunc``."""
    trunc = to_scalar(trunc)
    if trunc < 0:
        raise ValueError("truncation degree must be non-negative")
    c1, c2 = dict(m1.certificates), dict(m2.certificates)
    acc: dict[ClassExpr, Fraction] = defaultdict(Fraction)
    certs: dict[ClassExpr, PCertificate] = {}
    for c, x in m1.terms:
        for d, y in m2.terms:
            s = c + d
            if ample_degree(lattice, a, s) > trunc:
                continue
            acc[s] += x * y
            certs.setdefault(s, c1[c] + c2[d])
    return MonoidRingElement._from(acc, certs)


# -- K[x, y][(xy - 1)^-1] --------------------------------------------------

# basis index: ("x", a, c) is x^a u^c (a >= 0); ("y", b, c) is y^b u^c (b >= 1)
BasisIndex = tuple[str, int, int]


def basis_index(a: int, b: int, c: int) -> BasisIndex:
    if a and b:
        raise ValueError("basis monomials involve only one of x, y")
    if b:
        return ("y", b, c)
    return ("x", a, c)


def basis_exponents(idx: BasisIndex) -> tuple[int, int, int]:
    branch, e, c = idx
    return (e, 0, c) if branch == "x" else (0, e, c)


def _basis_key(idx: BasisIndex):
    branch, e, c = idx
    return (branch, e, c)


@dataclass(frozen=True)
class LocalElement:
    terms: tuple[tuple[BasisIndex, Fraction], ...]

    @classmethod
    def from_dict(cls, terms: Mapping[BasisIndex, object]) -> LocalElement:
        clean = {}
        for idx, c in terms.items():
            branch, e, upow = idx
            if branch not in ("x", "y") or e < 0 or (branch == "y" and e == 0):
                raise ValueError(f"{idx} is not a basis index")
            c = to_scalar(c)
            if c:
                clean[(branch, int(e), int(upow))] = c
        return cls(tuple(sorted(clean.items(), key=lambda kv: _basis_key(kv[0]))))

    @classmethod
    def one(cls) -> LocalElement:
        return cls(((("x", 0, 0), Fraction(1)),))

    def as_dict(self) -> dict[BasisIndex, Fraction]:
        return dict(self.terms)

    def __add__(self, other: LocalElement) -> LocalElement:
        acc: dict[BasisIndex, Fraction] = defaultdict(Fraction)
        for idx, c in self.terms + other.terms:
            acc[idx] += c
        return LocalElement.from_dict(acc)


def local_normal_form(expr: Iterable[tuple[object, int, int, int]]) -> LocalElement:
    """Normal form of ``sum coeff * x^a y^b u^c`` with ``a, b >= 0``.

    Each ``x y`` pair is replaced by ``u + 1``, so ``x^a y^b`` becomes
    ``(u + 1)^m x^(a-m) y^(b-m)`` with ``m = min(a, b)``.
    """
    acc: dict[BasisIndex, Fraction] = defaultdict(Fraction)
    for coeff, a, b, c in expr:
        coeff = to_scalar(coeff)
        if a < 0 or b < 0:
            raise ValueError("x and y are not invertible")
        if not coeff:
            continue
        m = min(a, b)
        idx_a, idx_b = a - m, b - m
        for k in range(m + 1):
            acc[basis_index(idx_a, idx_b, c + k)] += coeff * comb(m, k)
    return LocalElement.from_dict(acc)


def local_mul(e1: LocalElement, e2: LocalElement) -> LocalElement:
    expr = []
    for i1, x in e1.terms:
        a1, b1, c1 = basis_exponents(i1)
        for i2, y in e2.terms:
            a2, b2, c2 = basis_exponents(i2)
            expr.append((x * y, a1 + a2, b1 + b2, c1 + c2))
    return local_normal_form(expr)


# -- torus -----------------------------------------------------------------


def torus_product(p: tuple[int, int], q: tuple[int, int]) -> tuple[int, int]:
    """Exponent of ``x^p * x^q`` in the Laurent ring ``Z[N]``."""
    return (p[0] + q[0], p[1] + q[1])
