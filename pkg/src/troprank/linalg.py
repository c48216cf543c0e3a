"""Exact rational matrix arithmetic.

Every routine works over :class:`fractions.Fraction`.  Rows are cleared of
denominators and reduced with fraction-free (Bareiss) elimination, so the
intermediate integers stay bounded by the size of the minors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class Matrix:
    """An immutable rows x cols matrix of Fractions.

    ``cols`` is stored explicitly so that a system with zero rows still
    knows how many unknowns it constrains.
    """

    rows: tuple[Vector, ...]
    cols: int

    def __post_init__(self):
        if self.cols < 0:
            raise ValueError("negative column count")
        for r in self.rows:
            if len(r) != self.cols:
                raise ValueError("ragged matrix: row of length %d, expected %d" % (len(r), self.cols))

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], cols: int | None = None) -> "Matrix":
        rows = tuple(tuple(Fraction(x) for x in r) for r in rows)
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for an empty matrix")
            cols = len(rows[0])
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, r: int, c: int) -> "Matrix":
        return cls.from_rows([[0] * c for _ in range(r)], c)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.cols

    def transpose(self) -> "Matrix":
        return Matrix(tuple(tuple(r[j] for r in self.rows) for j in range(self.cols)), len(self.rows))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def apply(self, v: Sequence) -> Vector:
        return tuple(sum((a * Fraction(b) for a, b in zip(r, v)), Fraction(0)) for r in self.rows)


def as_matrix(m) -> Matrix:
    if isinstance(m, Matrix):
        return m
    m = list(m)
    return Matrix.from_rows(m)


def _integer_rows(m: Matrix) -> list[list[int]]:
    out = []
    for r in m.rows:
        d = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * d) for x in r])
    return out


def _bareiss(a: list[list[int]], ncols: int) -> list[int]:
    """Reduce ``a`` in place to row echelon form; return the pivot columns.

    Pivot choice is the first nonzero entry scanning rows top-down in the
    current column.
    """
    nrows = len(a)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            f = a[i][c]
            row_i = a[i]
            row_r = a[r]
            for j in range(c, ncols):
                row_i[j] = (piv * row_i[j] - f * row_r[j]) // prev
        # rows above the pivot row are untouched; rows below were scaled by piv/prev
        prev = piv
        pivots.append(c)
        r += 1
    return pivots


def matrix_rank(m) -> int:
    """Rank of ``m`` over the rationals."""
    m = as_matrix(m)
    if not m.rows or not m.cols:
        return 0
    return len(_bareiss(_integer_rows(m), m.cols))


def nullity(m) -> int:
    m = as_matrix(m)
    return m.cols - matrix_rank(m)


def solve_homogeneous(m) -> list[Vector]:
    """Basis of the right kernel ``{v : m v = 0}``.

    The basis is the reduced one: each vector has a 1 in its own free column
    and 0 in every other free column.
    """
    m = as_matrix(m)
    n = m.cols
    if not m.rows:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    a = _integer_rows(m)
    pivots = _bareiss(a, n)
    rank = len(pivots)
    # back substitution over Fractions on the echelon rows only
    ech = [[Fraction(x) for x in a[i]] for i in range(rank)]
    for i in range(rank - 1, -1, -1):
        c = pivots[i]
        inv = 1 / ech[i][c]
        ech[i] = [x * inv for x in ech[i]]
        for k in range(i):
            f = ech[k][c]
            if f:
                ech[k] = [x - f * y for x, y in zip(ech[k], ech[i])]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -ech[i][fc]
        basis.append(tuple(v))
    return basis


def solve(m, rhs: Sequence) -> Vector | None:
    """One solution of ``m x = rhs`` (free variables set to zero), or None."""
    m = as_matrix(m)
    aug = Matrix.from_rows([list(r) + [Fraction(b)] for r, b in zip(m.rows, rhs)], m.cols + 1)
    sol = solve_homogeneous(aug)
    # a solution exists iff some kernel vector has a nonzero last entry
    for v in sol:
        if v[-1] != 0:
            return tuple(-x / v[-1] for x in v[:-1])
    if not m.rows:
        return tuple(Fraction(0) for _ in range(m.cols))
    return None


def determinant(m) -> Fraction:
    m = as_matrix(m)
    r, c = m.shape
    if r != c:
        raise ValueError("determinant of a non-square matrix")
    if r == 0:
        return Fraction(1)
    a = [list(row) for row in m.rows]
    det = Fraction(1)
    for col in range(r):
        p = next((i for i in range(col, r) if a[i][col] != 0), None)
        if p is None:
            return Fraction(0)
        if p != col:
            a[col], a[p] = a[p], a[col]
            det = -det
        piv = a[col][col]
        det *= piv
        for i in range(col + 1, r):
            f = a[i][col] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return det


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            p = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if p is None:
                return 0
            a[k], a[p] = a[p], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
