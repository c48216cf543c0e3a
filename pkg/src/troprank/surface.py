"""Bloc-growing rank bounds for tropical surfaces in R^3.

The bloc starts as one cell, whose lift has 4 free parameters.  A cell is
absorbed when it shares a 2-face with some cell of the bloc; its lift is an
affine function, of which dim(S) + 1 parameters are pinned by the already
lifted shared vertices S.  So the upper bound grows by 3 - dim(S).  Shared
vertices beyond an affine basis of S may also cut the count, once each,
which gives the lower bound.  One is taken off both at the end for the
additive constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import geometry as geo
from .errors import PreconditionError
from .subdivision import Subdivision, adjacent_pairs


@dataclass
class AlgoRun:
    lower: int
    upper: int
    order: list[int] = field(default_factory=list)
    trace: list[str] = field(default_factory=list)


def _neighbours(s: Subdivision) -> dict[int, set[int]]:
    nb: dict[int, set[int]] = {i: set() for i in range(len(s.cells))}
    for a, b, shared in adjacent_pairs(s):
        nb[a].add(b)
        nb[b].add(a)
    return nb


def algo_bounds(s: Subdivision, start: tuple[int, int] | None = None) -> AlgoRun:
    """Run the bloc algorithm from ``start`` (a 2-face-adjacent cell pair)."""
    if s.n != 3:
        raise PreconditionError("the bloc algorithm is for surfaces in R^3")
    n_cells = len(s.cells)
    nb = _neighbours(s)
    if start is None:
        if n_cells != 1:
            raise PreconditionError("a start pair is required when there are several cells")
        first = [0]
    else:
        a, b = start
        if b not in nb[a]:
            raise PreconditionError(f"cells {a} and {b} do not share a 2-face")
        first = [a, b]
    run = AlgoRun(0, 0)
    bloc: set[int] = set()
    known: set[int] = set()
    upper = 0
    penalty = 0

    def absorb(ci):
        nonlocal upper, penalty
        verts = set(s.cells[ci].vertex_indices)
        shared = sorted(verts & known)
        if not bloc:
            gain, cut = 4, 0
        else:
            d = geo.affine_dim([s.vertices[v] for v in shared])
            gain, cut = 3 - d, max(0, len(shared) - d - 1)
        upper += gain
        penalty += cut
        bloc.add(ci)
        known.update(verts)
        run.order.append(ci)
        run.trace.append(f"cell {ci}: shared {len(shared)}, +{gain}, suspicious {cut}")

    for ci in first:
        absorb(ci)
    while len(bloc) < n_cells:
        cands = sorted({j for i in bloc for j in nb[i]} - bloc)
        if not cands:
            missing = sorted(set(range(n_cells)) - bloc)
            raise PreconditionError(f"cells {missing} cannot be reached through 2-faces")
        solid = [j for j in cands
                 if geo.affine_dim([s.vertices[v] for v in set(s.cells[j].vertex_indices) & known]) == 3]
        absorb(solid[0] if solid else cands[0])
    run.upper = upper - 1
    run.lower = upper - penalty - 1
    return run


def best_algo_bounds(s: Subdivision) -> tuple[int, int]:
    """(max lower, min upper) over every ordered start pair."""
    if s.n != 3:
        raise PreconditionError("the bloc algorithm is for surfaces in R^3")
    if len(s.cells) == 1:
        r = algo_bounds(s, None)
        return r.lower, r.upper
    lo, hi = None, None
    for a, b, _ in adjacent_pairs(s):
        for pair in ((a, b), (b, a)):
            r = algo_bounds(s, pair)
            lo = r.lower if lo is None else max(lo, r.lower)
            hi = r.upper if hi is None else min(hi, r.upper)
    return lo, hi
