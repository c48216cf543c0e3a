"""Expected ranks, the linear-algebra rank oracle and rank reports.

The oracle counts coefficient vectors inducing a fixed subdivision: the
space of c that are affine on every cell, minus one for the global additive
constant.  Regularity is required so that this space actually meets the
open cone of vectors inducing the subdivision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import geometry as geo
from .errors import NonInterior, NonRegular, PreconditionError
from .linalg import Matrix, nullity
from .subdivision import (Subdivision, TropicalPolynomial, certify_interior, condition_matrix,
                          pick_interior_coefficients)

# certificate labels carried by reports
NODAL = "nodal-lemma"
TWO_SING = "two-singularity-corollary"
THREE_SING = "three-singularity-formula"
ORDERED = "ordered-upper-bound"
DEFECT_BOUND = "defect-bound"
FEW_NONSIMPLEX = "few-nonsimplex-formula"
BLOC = "bloc-algorithm"
ORACLE = "oracle"
COMPONENTS = "bounded-components-formula"


@dataclass
class RankReport:
    lower: int
    upper: int
    certificate: str
    oracle: int | None = None
    defect: int | None = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    @classmethod
    def exact(cls, value: int, certificate: str, **kw) -> "RankReport":
        return cls(value, value, certificate, **kw)

    @property
    def is_exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> int:
        if not self.is_exact:
            raise ValueError("report holds bounds, not an exact value")
        return self.lower

    @property
    def kind(self) -> str:
        return f"Exact({self.lower})" if self.is_exact else f"Bounds({self.lower}, {self.upper})"

    def __str__(self):
        return f"{self.kind} [{self.certificate}]"


def expected_rank_embedded(s: Subdivision) -> int:
    """#Vert(S) - 1 - sum over cells of (#Vert(cell) - (n+1))."""
    return len(s.vertices) - 1 - sum(len(c) - (s.n + 1) for c in s.cells)


def expected_rank_param(n_ends: int, n: int, genus: int, valences: Sequence[int]) -> int:
    """#End + (n-3)(1-g) - sum over nodes of (valence - 3)."""
    return n_ends + (n - 3) * (1 - genus) - sum(v - 3 for v in valences)


def oracle_rank(s: Subdivision, certificate: TropicalPolynomial | None = None) -> int:
    """Dimension of the space of lifts inducing ``s``, modulo constants.

    ``certificate`` may supply a known interior coefficient vector; otherwise
    regularity is established by linear programming (NonRegular if it fails).
    """
    if certificate is not None:
        try:
            certify_interior(s, certificate)
        except NonInterior as e:
            raise NonRegular(f"supplied coefficients do not induce the subdivision: {e}") from e
    else:
        pick_interior_coefficients(s)
    return nullity(condition_matrix(s)) - 1


def defect(s: Subdivision, certificate: TropicalPolynomial | None = None) -> int:
    return oracle_rank(s, certificate) - expected_rank_embedded(s)


def parallelogram_condition_matrix(s: Subdivision, order: Sequence[int]) -> tuple[Matrix, list[int]]:
    """Coplanarity conditions of the parallelograms, columns in discovery order.

    Returns the matrix and the vertex index behind each column.  ``order`` is
    a sequence of cell indices; vertices are numbered as the cells are
    visited and any vertex never visited is appended afterwards.
    """
    if s.n != 2:
        raise PreconditionError("parallelogram conditions are planar")
    for i in range(len(s.cells)):
        k = s.cell_class(i).kind
        if k not in (geo.PolygonClass.TRIANGLE, geo.PolygonClass.PARALLELOGRAM):
            raise PreconditionError(f"cell {i} is a {s.cell_class(i)}, not a triangle or parallelogram")
    cols: list[int] = []
    seen = set()
    for ci in order:
        for v in sorted(s.cells[ci].vertex_indices):
            if v not in seen:
                seen.add(v)
                cols.append(v)
    cols += [v for v in range(len(s.vertices)) if v not in seen]
    where = {v: j for j, v in enumerate(cols)}
    rows = []
    for ci in order:
        if s.cell_class(ci).kind != geo.PolygonClass.PARALLELOGRAM:
            continue
        idx = s.cells[ci].vertex_indices
        cyc = [idx[k] for k in geo.convex_cyclic_order(s.cell_points(ci))]
        row = [0] * len(cols)
        for k, v in enumerate(cyc):
            row[where[v]] = 1 if k % 2 == 0 else -1
        rows.append(row)
    return Matrix.from_rows(rows, len(cols)), cols


def is_staircase(m: Matrix) -> bool:
    """Each row reaches a column strictly beyond every column of the rows above it.

    Such a matrix has full row rank: reversing the columns makes it echelon.
    """
    last = -1
    for r in m.rows:
        nz = [j for j, x in enumerate(r) if x != 0]
        if not nz or nz[-1] <= last:
            return False
        last = nz[-1]
    return True


def cell_points_list(s: Subdivision) -> list[list[tuple[int, ...]]]:
    return [s.cell_points(i) for i in range(len(s.cells))]


def cooriented_order(s: Subdivision, a: Sequence[Fraction] | None = None) -> list[int]:
    """Cells ordered by the coorientation of a generic direction (default deterministic)."""
    cells = cell_points_list(s)
    if a is None:
        a = geo.generic_vector(cells)
    return geo.coorient_order(cells, a)
