"""Exact 2D integer linear algebra.

Vectors and matrices hold Python ints (arbitrary precision).  Nothing here
ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

Scalar = Fraction
Number = Union[int, Fraction]


class ZeroVector(ValueError):
    pass


class NotUnimodular(ValueError):
    pass


def to_scalar(value) -> Fraction:
    """Parse an int, Fraction or a decimal/"p/q" string into a Fraction."""
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def scalar_str(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, order=True)
class Vec2Z:
    a: int
    b: int

    def __add__(self, other: Vec2Z) -> Vec2Z:
        return Vec2Z(self.a + other.a, self.b + other.b)

    def __sub__(self, other: Vec2Z) -> Vec2Z:
        return Vec2Z(self.a - other.a, self.b - other.b)

    def __neg__(self) -> Vec2Z:
        return Vec2Z(-self.a, -self.b)

    def __mul__(self, k: int) -> Vec2Z:
        return Vec2Z(k * self.a, k * self.b)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def as_tuple(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True)
class Mat2Z:
    """2x2 integer matrix, row-major ``[[a, b], [c, d]]``."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, rows) -> Mat2Z:
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def identity(cls) -> Mat2Z:
        return cls(1, 0, 0, 1)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def transpose(self) -> Mat2Z:
        return Mat2Z(self.a, self.c, self.b, self.d)

    def __matmul__(self, other: Mat2Z) -> Mat2Z:
        return mat_mul(self, other)


def wedge(v, w):
    """Determinant of the 2x2 matrix with columns ``v`` and ``w``.

    Works for any pair-like objects with ``.a``/``.b`` or 2-tuples, so it
    can be reused for rational covectors.
    """
    va, vb = _pair(v)
    wa, wb = _pair(w)
    return va * wb - vb * wa


def _pair(v):
    if isinstance(v, Vec2Z):
        return v.a, v.b
    a, b = v
    return a, b


def primitive_part(v: Vec2Z) -> tuple[Vec2Z, int]:
    if v.is_zero():
        raise ZeroVector("the zero vector has no primitive part")
    d = gcd(v.a, v.b)
    return Vec2Z(v.a // d, v.b // d), d


def divisibility(v: Vec2Z) -> int:
    return primitive_part(v)[1]


def mat_apply(m: Mat2Z, v):
    """Apply ``m`` to an integer vector (returns Vec2Z) or a rational pair."""
    if isinstance(v, Vec2Z):
        return Vec2Z(m.a * v.a + m.b * v.b, m.c * v.a + m.d * v.b)
    x, y = v
    return (m.a * x + m.b * y, m.c * x + m.d * y)


def mat_mul(m: Mat2Z, n: Mat2Z) -> Mat2Z:
    return Mat2Z(
        m.a * n.a + m.b * n.c,
        m.a * n.b + m.b * n.d,
        m.c * n.a + m.d * n.c,
        m.c * n.b + m.d * n.d,
    )


def mat_inverse(m: Mat2Z) -> Mat2Z:
    det = m.det()
    if det not in (1, -1):
        raise NotUnimodular(f"determinant {det} is not a unit")
    return Mat2Z(det * m.d, -det * m.b, -det * m.c, det * m.a)


def mat_power(m: Mat2Z, k: int) -> Mat2Z:
    if k < 0:
        return mat_power(mat_inverse(m), -k)
    result = Mat2Z.identity()
    base = m
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


# -- integer kernels -------------------------------------------------------


def integer_kernel(rows: list[list[int]]) -> list[list[int]]:
    """Z-basis of ``{x in Z^n : A x = 0}`` in row Hermite normal form.

    Column operations reduce ``A`` to echelon form while tracking the
    unimodular transform; transform columns over zero columns span the
    integer kernel.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    a = [list(map(int, r)) for r in rows]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def swap(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in u:
            r[i], r[j] = r[j], r[i]

    def addmul(dst, src, k):
        # column dst += k * column src
        for r in a:
            r[dst] += k * r[src]
        for r in u:
            r[dst] += k * r[src]

    pivot_col = 0
    for row in range(len(a)):
        if pivot_col >= ncols:
            break
        # Euclid across columns pivot_col.. until a single nonzero remains
        while True:
            nz = [j for j in range(pivot_col, ncols) if a[row][j] != 0]
            if len(nz) <= 1:
                break
            j_min = min(nz, key=lambda j: abs(a[row][j]))
            for j in nz:
                if j != j_min:
                    addmul(j, j_min, -(a[row][j] // a[row][j_min]))
        nz = [j for j in range(pivot_col, ncols) if a[row][j] != 0]
        if nz:
            swap(pivot_col, nz[0])
            pivot_col += 1

    basis = [[u[i][j] for i in range(ncols)] for j in range(pivot_col, ncols)]
    return hermite_rows(basis)


def hermite_rows(vectors: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``vectors``."""
    m = [list(v) for v in vectors if any(v)]
    if not m:
        return []
    ncols = len(m[0])
    out: list[list[int]] = []
    col = 0
    while m and col < ncols:
        while True:
            nz = [r for r in m if r[col] != 0]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda r: abs(r[col]))
            for r in nz:
                if r is not piv:
                    q = r[col] // piv[col]
                    for j in range(ncols):
                        r[j] -= q * piv[j]
        nz = [r for r in m if r[col] != 0]
        if nz:
            piv = nz[0]
            if piv[col] < 0:
                piv[:] = [-x for x in piv]
            m.remove(piv)
            out.append(piv)
        m = [r for r in m if any(r)]
        col += 1
    # reduce entries above each pivot into [0, pivot)
    for i, r in enumerate(out):
        p = next(j for j, x in enumerate(r) if x != 0)
        for above in out[:i]:
            q = above[p] // r[p]
            if q:
                for j in range(ncols):
                    above[j] -= q * r[j]
    return out
