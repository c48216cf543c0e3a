"""Rank bounds and exact formulas for embedded plane tropical curves.

Cells that are neither triangles nor parallelograms are called non-trivial
here; they are the duals of the curve's non-nodal singular points.  The
ordered bound charges each non-trivial cell for the vertices it adds beyond
those already fixed by earlier non-trivial cells.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Callable, Sequence

from . import geometry as geo
from .errors import BudgetError, NonRegular, PreconditionError
from .rank import (DEFECT_BOUND, NODAL, ORDERED, THREE_SING, TWO_SING, RankReport,
                   cell_points_list, expected_rank_embedded, oracle_rank)
from .subdivision import Subdivision

EXHAUSTIVE_LIMIT = 8


def _need_plane(s: Subdivision):
    if s.n != 2:
        raise PreconditionError(f"plane curve result applied in dimension {s.n}")


def lemma22_defect_bound(s: Subdivision) -> int:
    """Upper bound for twice the defect, from the polygon census of ``s``."""
    _need_plane(s)
    raw = 0
    qualifying = False
    for i in range(len(s.cells)):
        cls = s.cell_class(i)
        if cls.kind == geo.PolygonClass.EVEN_NONPARALLEL:
            raw += 2 * cls.m - 3
            qualifying = True
        elif cls.kind == geo.PolygonClass.PARALLEL_EVEN:
            raw += 2 * cls.m - 4
            qualifying = True
        elif cls.kind == geo.PolygonClass.ODD:
            raw += 2 * cls.m - 2
            qualifying = True
    if not qualifying:
        return 0
    return max(0, raw - 1)


def _check_order(s: Subdivision, order: Sequence[int], allowed: Sequence[int]):
    if sorted(order) != sorted(allowed) or len(set(order)) != len(order):
        raise PreconditionError(f"order {list(order)} is not a permutation of cells {sorted(allowed)}")


def upper_bound_ordered(s: Subdivision, order: Sequence[int]) -> int:
    """Ordered upper bound; ``order`` permutes the non-trivial cells."""
    _need_plane(s)
    nontrivial = s.nontrivial_cells()
    _check_order(s, order, nontrivial)
    total = len(s.vertices) - 1
    for i in range(len(s.cells)):
        if i not in set(nontrivial):
            total -= len(s.cells[i]) - 3
    seen: set[int] = set()
    for ci in order:
        verts = set(s.cells[ci].vertex_indices)
        total -= len(verts) - max(3, len(verts & seen))
        seen |= verts
    return total


@dataclass(frozen=True)
class Strategy:
    kind: str  # "exhaustive" | "cooriented" | "sampled" | "auto"
    seed: int = 0
    count: int = 200

    @classmethod
    def parse(cls, text: str) -> "Strategy":
        parts = text.split(":")
        kind = parts[0]
        if kind not in ("exhaustive", "cooriented", "sampled", "auto"):
            raise ValueError(f"unknown strategy {text!r}")
        seed = int(parts[1]) if len(parts) > 1 else 0
        count = int(parts[2]) if len(parts) > 2 else 200
        return cls(kind, seed, count)


EXHAUSTIVE = Strategy("exhaustive")
COORIENTED = Strategy("cooriented")
AUTO = Strategy("auto")


def candidate_orders(s: Subdivision, cells: Sequence[int], strategy: Strategy) -> list[tuple[int, ...]]:
    """Orderings of ``cells`` to try under a search strategy."""
    cells = list(cells)
    if strategy.kind == "exhaustive" or (strategy.kind == "auto" and len(cells) <= EXHAUSTIVE_LIMIT):
        if len(cells) > EXHAUSTIVE_LIMIT:
            raise BudgetError(f"{len(cells)} cells exceed the exhaustive limit of {EXHAUSTIVE_LIMIT}")
        return list(permutations(cells))
    out: list[tuple[int, ...]] = []
    if strategy.kind in ("cooriented", "auto"):
        pts = cell_points_list(s)
        a = geo.generic_vector(pts)
        for sign in (1, -1):
            full = geo.coorient_order(pts, tuple(sign * x for x in a))
            keep = set(cells)
            out.append(tuple(c for c in full if c in keep))
    if strategy.kind in ("sampled", "auto"):
        rng = random.Random(strategy.seed)
        n_orders = min(strategy.count, factorial(len(cells)))
        for _ in range(n_orders):
            perm = cells[:]
            rng.shuffle(perm)
            out.append(tuple(perm))
    return out


def minimise_over_orders(s: Subdivision, cells: Sequence[int], bound: Callable, strategy: Strategy) -> int:
    return min(bound(s, order) for order in candidate_orders(s, cells, strategy))


def best_upper_bound(s: Subdivision, strategy: Strategy = AUTO) -> int:
    _need_plane(s)
    return minimise_over_orders(s, s.nontrivial_cells(), upper_bound_ordered, strategy)


def three_nontrivial_values(s: Subdivision) -> dict[tuple[int, ...], int]:
    """The ordered formula under every labelling of the three non-trivial cells."""
    _need_plane(s)
    nt = s.nontrivial_cells()
    if len(nt) != 3:
        raise PreconditionError(f"exactly three non-trivial cells required, found {len(nt)}")
    return {order: upper_bound_ordered(s, order) for order in permutations(nt)}


def exact_rank_three_nontrivial(s: Subdivision) -> int:
    return min(three_nontrivial_values(s).values())


def rank_with_certificate(s: Subdivision, with_oracle: bool = True, strategy: Strategy = AUTO) -> RankReport:
    """Strongest available statement about the rank of a plane curve."""
    _need_plane(s)
    exp = expected_rank_embedded(s)
    nt = s.nontrivial_cells()
    notes: dict = {"nontrivial": len(nt)}
    if not nt:
        rep = RankReport.exact(exp, NODAL)
    elif len(nt) <= 2:
        rep = RankReport.exact(exp, TWO_SING)
    elif len(nt) == 3:
        vals = three_nontrivial_values(s)
        notes["orderings"] = {",".join(map(str, k)): v for k, v in vals.items()}
        notes["ordering_independent"] = len(set(vals.values())) == 1
        rep = RankReport.exact(min(vals.values()), THREE_SING)
    else:
        ordered = best_upper_bound(s, strategy)
        by_defect = exp + lemma22_defect_bound(s) // 2
        notes["ordered_upper"] = ordered
        notes["defect_upper"] = by_defect
        if by_defect < ordered:
            rep = RankReport(exp, by_defect, DEFECT_BOUND)
        else:
            rep = RankReport(exp, ordered, ORDERED)
    rep.notes.update(notes)
    if with_oracle:
        rep.oracle = oracle_rank(s)
        rep.defect = rep.oracle - exp
    return rep


__all__ = [
    "lemma22_defect_bound", "upper_bound_ordered", "best_upper_bound", "exact_rank_three_nontrivial",
    "three_nontrivial_values", "rank_with_certificate", "Strategy", "EXHAUSTIVE", "COORIENTED", "AUTO",
    "candidate_orders", "minimise_over_orders", "NonRegular",
]
