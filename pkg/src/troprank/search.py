"""Seeded search for plane subdivisions whose rank exceeds the expected rank.

Candidates come from two interleaved samplers:

* random fold lifts on a small grid (any combinatorics; slow, so only one
  try in ``FOLD_EVERY``), and
* a ring of quadrangles around an inner triangle with random lattice
  coordinates, kept only when it is a valid regular subdivision.

A candidate is considered when its non-trivial cells are all
non-parallelogram quadrangles and there are between 1 and ``budget`` of
them.  It is reported when the oracle rank beats the expected rank.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import geometry as geo
from .generate import fold_heights, grid
from .rank import expected_rank_embedded, oracle_rank
from .subdivision import (Subdivision, TropicalPolynomial, is_regular, pick_interior_coefficients,
                          regular_subdivision_with_lift, validate)

RING_CELLS = ((0, 1, 4, 3), (1, 2, 5, 4), (2, 0, 3, 5), (3, 4, 5))
FOLD_EVERY = 50


@dataclass
class Witness:
    subdivision: Subdivision
    coefficients: TropicalPolynomial
    expected: int
    oracle: int
    source: str

    @property
    def defect(self) -> int:
        return self.oracle - self.expected


def _quads_only(s: Subdivision, budget: int) -> bool:
    nt = s.nontrivial_cells()
    if not 1 <= len(nt) <= budget:
        return False
    return all(s.cell_class(i).kind == geo.PolygonClass.EVEN_NONPARALLEL and s.cell_class(i).m == 2 for i in nt)


def _sample_fold(rng: random.Random, max_coord: int):
    k = rng.randint(2, max_coord)
    pts = grid(k, 2)
    return regular_subdivision_with_lift(pts, fold_heights(rng, pts, rng.randint(2, 5), 2 * k))


def _sample_ring(rng: random.Random, max_coord: int):
    k = rng.randint(3, max_coord)
    outer = [(rng.randint(0, k), rng.randint(0, k)) for _ in range(3)]
    if geo.cross(*outer) <= 0:
        return None
    inside = [(x, y) for x in range(k + 1) for y in range(k + 1)
              if all(geo.cross(outer[j], outer[(j + 1) % 3], (x, y)) > 0 for j in range(3))]
    if len(inside) < 3:
        return None
    inner = rng.sample(inside, 3)
    if geo.cross(*inner) < 0:
        inner = [inner[0], inner[2], inner[1]]
    if geo.cross(*inner) == 0:
        return None
    for r in range(3):
        s = Subdivision.build(outer + inner[r:] + inner[:r], RING_CELLS)
        if validate(s).ok:
            if not is_regular(s):
                return None
            return s, pick_interior_coefficients(s)
    return None


def _key(s: Subdivision):
    return tuple(sorted(tuple(sorted(s.vertices[i] for i in c.vertex_indices)) for c in s.cells))


def search_defect(seed: int = 0, max_coord: int = 6, budget: int = 3, tries: int = 20000,
                  limit: int | None = None) -> list[Witness]:
    """Deterministic under ``seed``; returns witnesses in discovery order."""
    rng = random.Random(seed)
    found: list[Witness] = []
    seen = set()
    for t in range(tries):
        source = "fold" if t % FOLD_EVERY == 0 else "ring"
        got = _sample_ring(rng, max_coord) if source == "ring" else _sample_fold(rng, max_coord)
        if got is None:
            continue
        s, f = got
        if not _quads_only(s, budget):
            continue
        key = _key(s)
        if key in seen:
            continue
        seen.add(key)
        exp = expected_rank_embedded(s)
        orc = oracle_rank(s, f)
        if orc > exp:
            found.append(Witness(s, f, exp, orc, source))
            if limit is not None and len(found) >= limit:
                break
    return found
