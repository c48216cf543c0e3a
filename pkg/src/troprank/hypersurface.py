"""Ordered rank bounds for tropical hypersurfaces in R^n.

Only cells that are not simplices impose conditions.  Taken in some order,
cell i is charged for its new vertices, less the freedom left once the
affine span of its already seen vertices is pinned.
"""

from __future__ import annotations

from itertools import permutations
from typing import Sequence

from . import geometry as geo
from .curves import AUTO, Strategy, candidate_orders
from .errors import PreconditionError
from .rank import BLOC, FEW_NONSIMPLEX, ORDERED, RankReport, expected_rank_embedded, oracle_rank
from .subdivision import Subdivision
from .surface import best_algo_bounds


def nonsimplex_cells(s: Subdivision) -> list[int]:
    return [i for i in range(len(s.cells)) if not geo.is_simplex(s.cell_points(i), s.n)]


def upper_bound_nd(s: Subdivision, order: Sequence[int]) -> int:
    """#Vert - 1 - sum_i (new_i - n + dim_i) over the non-simplex cells in ``order``."""
    cells = nonsimplex_cells(s)
    if sorted(order) != cells or len(set(order)) != len(order):
        raise PreconditionError(f"order {list(order)} is not a permutation of the non-simplex cells {cells}")
    n = s.n
    total = len(s.vertices) - 1
    seen: set[int] = set()
    for ci in order:
        verts = set(s.cells[ci].vertex_indices)
        shared = verts & seen
        new = len(verts - seen)
        if shared:
            total -= new - n + geo.affine_dim([s.vertices[v] for v in sorted(shared)])
        else:
            total -= len(verts) - (n + 1)
        seen |= verts
    return total


def ordered_values_nd(s: Subdivision) -> dict[tuple[int, ...], int]:
    cells = nonsimplex_cells(s)
    if len(cells) > 3:
        raise PreconditionError(f"at most three non-simplex cells allowed, found {len(cells)}")
    return {order: upper_bound_nd(s, order) for order in permutations(cells)}


def exact_rank_nd(s: Subdivision) -> int:
    if s.n < 3:
        raise PreconditionError("the few-non-simplex formula is stated for n >= 3")
    return min(ordered_values_nd(s).values())


def best_upper_bound_nd(s: Subdivision, strategy: Strategy = AUTO) -> int:
    return min(upper_bound_nd(s, o) for o in candidate_orders(s, nonsimplex_cells(s), strategy))


def rank_with_certificate_nd(s: Subdivision, with_oracle: bool = True, strategy: Strategy = AUTO) -> RankReport:
    if s.n < 3:
        raise PreconditionError("use the plane curve dispatcher for n = 2")
    exp = expected_rank_embedded(s)
    cells = nonsimplex_cells(s)
    notes: dict = {"nonsimplex": len(cells)}
    if s.n == 3:
        lo3, hi3 = best_algo_bounds(s)
        notes["algo_bounds"] = (lo3, hi3)
    if len(cells) <= 3:
        vals = ordered_values_nd(s)
        notes["orderings"] = {",".join(map(str, k)): v for k, v in vals.items()}
        notes["ordering_independent"] = len(set(vals.values())) == 1
        rep = RankReport.exact(min(vals.values()), FEW_NONSIMPLEX)
    else:
        upper = best_upper_bound_nd(s, strategy)
        notes["ordered_upper"] = upper
        lower = exp
        cert = ORDERED
        if s.n == 3:
            lower = max(lower, lo3)
            if hi3 < upper:
                upper, cert = hi3, BLOC
        rep = RankReport(lower, upper, cert)
    rep.notes.update(notes)
    if with_oracle:
        rep.oracle = oracle_rank(s)
        rep.defect = rep.oracle - exp
    return rep
