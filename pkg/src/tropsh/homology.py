"""Intersection numbers with the boundary and certified membership in P.

``P`` is the monoid generated by the boundary components ``D_i`` and by
classes ``C`` with ``C . D_i >= 0`` for every ``i`` and ``C . D > 0``.
Deciding membership needs all of ``H_2(Y)``, which we do not have, so
membership is only ever *certified* by an explicit decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from tropsh.liouville import AmpleData
from tropsh.manifold import BoundaryData


class UnknownClassName(KeyError):
    pass


@dataclass(frozen=True)
class IntersectionLattice:
    n: int
    matrix: tuple[tuple[int, ...], ...]
    extra: tuple[tuple[str, tuple[int, ...]], ...] = ()

    def extra_vector(self, name: str) -> tuple[int, ...]:
        for key, vec in self.extra:
            if key == name:
                return vec
        raise UnknownClassName(name)

    def extra_names(self) -> list[str]:
        return [name for name, _ in self.extra]


def intersection_lattice(data: BoundaryData, extra: Mapping[str, Sequence[int]] | None = None
                         ) -> IntersectionLattice:
    """Cycle intersection form with ``Q_ii = k_i``.

    Two components meeting at two nodes (n = 2) pair to 2; a single nodal
    component (n = 1) gets ``k_1 + 2`` since ``k_1`` is measured on its
    normalization.
    """
    n = data.n
    q = [[0] * n for _ in range(n)]
    for i in range(n):
        q[i][i] += data.self_intersections[i]
        # one entry per node: node i+1 joins D_i and D_{i+1}
        j = (i + 1) % n
        if j == i:
            q[i][i] += 2
        else:
            q[i][j] += 1
            q[j][i] += 1
    extras = []
    for name, vec in (extra or {}).items():
        vec = tuple(int(x) for x in vec)
        if len(vec) != n:
            raise ValueError(f"extra class {name!r} needs {n} pairings")
        extras.append((str(name), vec))
    return IntersectionLattice(n, tuple(tuple(r) for r in q), tuple(extras))


@dataclass(frozen=True, order=True)
class ClassExpr:
    """``sum boundary[i] D_{i+1} + sum coeff * extra``; zero extras dropped."""

    boundary: tuple[int, ...]
    extra: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(int(x) for x in self.boundary))
        merged: dict[str, int] = {}
        for name, c in self.extra:
            merged[name] = merged.get(name, 0) + int(c)
        object.__setattr__(
            self, "extra", tuple(sorted((k, v) for k, v in merged.items() if v != 0))
        )

    @classmethod
    def zero(cls, n: int) -> ClassExpr:
        return cls((0,) * n)

    @classmethod
    def divisor(cls, n: int, i: int, mult: int = 1) -> ClassExpr:
        b = [0] * n
        b[(i - 1) % n] = mult
        return cls(tuple(b))

    @classmethod
    def named(cls, n: int, name: str, mult: int = 1) -> ClassExpr:
        return cls((0,) * n, ((name, mult),))

    def __add__(self, other: ClassExpr) -> ClassExpr:
        return ClassExpr(
            tuple(x + y for x, y in zip(self.boundary, other.boundary)),
            self.extra + other.extra,
        )

    def __neg__(self) -> ClassExpr:
        return ClassExpr(tuple(-x for x in self.boundary), tuple((k, -v) for k, v in self.extra))

    def __sub__(self, other: ClassExpr) -> ClassExpr:
        return self + (-other)

    def scaled(self, k: int) -> ClassExpr:
        return ClassExpr(tuple(k * x for x in self.boundary), tuple((n, k * v) for n, v in self.extra))

    def is_zero(self) -> bool:
        return not any(self.boundary) and not self.extra


def pair(lattice: IntersectionLattice, c: ClassExpr, i: int) -> int:
    """``c . D_i`` (1-based ``i``)."""
    i = (i - 1) % lattice.n
    total = sum(coef * lattice.matrix[j][i] for j, coef in enumerate(c.boundary))
    for name, coef in c.extra:
        total += coef * lattice.extra_vector(name)[i]
    return total


def pairing_vector(lattice: IntersectionLattice, c: ClassExpr) -> tuple[int, ...]:
    return tuple(pair(lattice, c, i) for i in range(1, lattice.n + 1))


@dataclass(frozen=True)
class Summand:
    """A boundary generator ``mult * D_index`` or a C-generator class."""

    kind: str  # "boundary" | "C"
    index: int = 0
    mult: int = 0
    expr: ClassExpr | None = None

    @classmethod
    def boundary(cls, index: int, mult: int = 1) -> Summand:
        return cls("boundary", index=index, mult=mult)

    @classmethod
    def generator(cls, c: ClassExpr) -> Summand:
        return cls("C", expr=c)

    def value(self, n: int) -> ClassExpr:
        if self.kind == "boundary":
            return ClassExpr.divisor(n, self.index, self.mult)
        return self.expr


@dataclass(frozen=True)
class PCertificate:
    summands: tuple[Summand, ...]

    def total(self, n: int) -> ClassExpr:
        out = ClassExpr.zero(n)
        for s in self.summands:
            out = out + s.value(n)
        return out

    def __add__(self, other: PCertificate) -> PCertificate:
        return PCertificate(self.summands + other.summands)


def boundary_certificate(coefficients: Sequence[int]) -> PCertificate:
    """The obvious certificate for a non-negative boundary combination."""
    return PCertificate(tuple(
        Summand.boundary(i + 1, int(c)) for i, c in enumerate(coefficients) if c != 0
    ))


@dataclass
class CertificateReport:
    ok: bool
    messages: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_P_certificate(lattice: IntersectionLattice, c: ClassExpr,
                         cert: PCertificate) -> CertificateReport:
    msgs = []
    n = lattice.n
    for k, s in enumerate(cert.summands):
        if s.kind == "boundary":
            if not 1 <= s.index <= n:
                msgs.append(f"summand {k}: no divisor D_{s.index}")
            elif s.mult < 0:
                msgs.append(f"summand {k}: negative multiple {s.mult} of D_{s.index}")
        elif s.kind == "C":
            try:
                vec = pairing_vector(lattice, s.expr)
            except UnknownClassName as exc:
                msgs.append(f"summand {k}: unknown class {exc.args[0]!r}")
                continue
            if any(x < 0 for x in vec):
                msgs.append(f"summand {k}: negative intersection {vec}")
            elif sum(vec) <= 0:
                msgs.append(f"summand {k}: C.D = {sum(vec)} is not positive")
        else:
            msgs.append(f"summand {k}: unknown kind {s.kind!r}")
    if not msgs and cert.total(n) != ClassExpr(c.boundary, c.extra):
        msgs.append("summands do not add up to the class")
    return CertificateReport(not msgs, msgs)


def ample_degree(lattice: IntersectionLattice, a: AmpleData, c: ClassExpr) -> Fraction:
    return sum((a.coeff(i) * pair(lattice, c, i) for i in range(1, lattice.n + 1)), Fraction(0))


def is_ample_on_boundary(lattice: IntersectionLattice, a: AmpleData) -> bool:
    """``A . D_i > 0`` for every component, the part of ampleness visible here."""
    return all(
        sum(a.coeff(j + 1) * lattice.matrix[j][i] for j in range(lattice.n)) > 0
        for i in range(lattice.n)
    )
