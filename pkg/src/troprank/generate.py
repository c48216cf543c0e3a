"""Seeded random instances for tests, the acceptance suite and the search.

All generators take a :class:`random.Random` so that a seed pins the whole
stream.  Subdivisions always come from explicit lifts, hence are regular
and ship with a certified coefficient vector.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterator

from . import geometry as geo
from .param import Edge, End, EndMarking, ParamCurve
from .subdivision import Subdivision, TropicalPolynomial, regular_subdivision_with_lift


def grid(k: int, n: int) -> list[tuple[int, ...]]:
    return list(product(range(k + 1), repeat=n))


def simplex_points(k: int, n: int) -> list[tuple[int, ...]]:
    return [p for p in grid(k, n) if sum(p) <= k]


def _affine(rng: random.Random, n: int, spread: int) -> tuple[int, tuple[int, ...]]:
    return rng.randint(-spread, spread), tuple(rng.randint(-spread, spread) for _ in range(n))


def structured_heights(rng: random.Random, pts, pieces: int = 3, spread: int = 3, noise: float = 0.3) -> list[int]:
    """Minimum of a few affine functions, plus noise on a random subset.

    The minimum alone gives large cells (linearity domains); the noise
    refines some of them.  This mix yields cells of many shapes.
    """
    n = len(pts[0])
    funcs = [_affine(rng, n, spread) for _ in range(pieces)]
    out = []
    for p in pts:
        h = min(c + geo.dot(g, p) for c, g in funcs)
        if rng.random() < noise:
            h -= rng.randint(1, 2)
        out.append(h)
    return out


def fold_heights(rng: random.Random, pts, folds: int = 4, spread: int = 6) -> list[int]:
    """Sum of creases min(0, <u, p> - b): a concave lift folded along a
    random arrangement of hyperplanes, whose chambers become large cells."""
    n = len(pts[0])
    creases = []
    for _ in range(folds):
        u = tuple(rng.randint(-2, 2) for _ in range(n))
        if not any(u):
            u = (1,) + (0,) * (n - 1)
        creases.append((u, rng.randint(-spread, spread)))
    return [sum(min(0, geo.dot(u, p) - b) for u, b in creases) for p in pts]


def random_lift(rng: random.Random, n: int = 2, k: int = 2, shape: str = "grid",
                mode: str | None = None) -> tuple[Subdivision, TropicalPolynomial]:
    """A regular subdivision of a small lattice polytope with its lift."""
    pts = grid(k, n) if shape == "grid" else simplex_points(k, n)
    mode = mode or rng.choice(["structured", "folds", "folds", "random", "quadratic"])
    if mode == "folds":
        h = fold_heights(rng, pts, rng.randint(2, 5), 2 * k)
    elif mode == "random":
        h = [rng.randint(0, 3 * k) for _ in pts]
    elif mode == "quadratic":
        forms = [tuple(rng.randint(-1, 1) for _ in range(n)) for _ in range(rng.randint(n, n + 2))]
        forms = [f for f in forms if any(f)] or [tuple(int(i == j) for j in range(n)) for i in range(n)]
        h = [-sum(geo.dot(f, p) ** 2 for f in forms) for p in pts]
        for i in range(len(h)):
            if rng.random() < 0.15:
                h[i] -= 1
    else:
        h = structured_heights(rng, pts, pieces=rng.randint(2, 4), spread=2 + k, noise=rng.choice([0.0, 0.2, 0.4]))
    return regular_subdivision_with_lift(pts, h)


def nodal_curve(rng: random.Random, k1: int = 2, k2: int = 2) -> tuple[Subdivision, TropicalPolynomial]:
    """Product of two generic plane curves: a curve whose only singular
    points are the transversal crossings, dual to parallelograms.

    Each factor's coefficients are random; the product's coefficients are
    the tropical convolution.  Non-generic draws (a crossing through a
    vertex) are retried by the caller via :func:`is_nodal`.
    """
    pa = simplex_points(k1, 2)
    pb = simplex_points(k2, 2)
    a = [rng.randint(0, 6 * k1) for _ in pa]
    b = [rng.randint(0, 6 * k2) for _ in pb]
    best: dict = {}
    for p, x in zip(pa, a):
        for q, y in zip(pb, b):
            w = (p[0] + q[0], p[1] + q[1])
            best[w] = max(best.get(w, x + y), x + y)
    pts = sorted(best)
    return regular_subdivision_with_lift(pts, [best[p] for p in pts])


def is_nodal(s: Subdivision) -> bool:
    return all(s.cell_class(i).kind in (geo.PolygonClass.TRIANGLE, geo.PolygonClass.PARALLELOGRAM)
               for i in range(len(s.cells)))


def nodal_instances(rng: random.Random, count: int) -> Iterator[tuple[Subdivision, TropicalPolynomial]]:
    made = 0
    while made < count:
        kind = rng.random()
        if kind < 0.6:
            s, f = nodal_curve(rng, rng.randint(1, 2), rng.randint(1, 2))
        else:
            s, f = random_lift(rng, 2, rng.randint(1, 3), mode="quadratic")
        if is_nodal(s):
            made += 1
            yield s, f


def plane_instances(rng: random.Random, count: int, max_nontrivial: int | None = None,
                    min_nontrivial: int = 0, exact: int | None = None, k_range=(1, 4), mode: str | None = None):
    """Random regular plane subdivisions filtered by their non-trivial cell count."""
    made = 0
    while made < count:
        s, f = random_lift(rng, 2, rng.randint(*k_range), shape=rng.choice(["grid", "simplex"]), mode=mode)
        m = len(s.nontrivial_cells())
        if exact is not None and m != exact:
            continue
        if max_nontrivial is not None and m > max_nontrivial:
            continue
        if m < min_nontrivial:
            continue
        made += 1
        yield s, f


def space_instances(rng: random.Random, count: int, n: int = 3, k_range=(1, 2), max_vertices: int = 30):
    made = 0
    while made < count:
        s, f = random_lift(rng, n, rng.randint(*k_range), shape=rng.choice(["grid", "simplex"]))
        if len(s.vertices) > max_vertices:
            continue
        made += 1
        yield s, f


# ------------------------------------------------------------ linear maps

def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> list[list[int]]:
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        op = rng.random()
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if op < 0.6 and n > 1:
            k = rng.choice([-2, -1, 1, 2])
            U[i] = [a + k * b for a, b in zip(U[i], U[j])]
        elif op < 0.8 and n > 1:
            U[i], U[j] = U[j], U[i]
        else:
            U[i] = [-a for a in U[i]]
    return U


def random_translation(rng: random.Random, n: int, spread: int = 5) -> list[int]:
    return [rng.randint(-spread, spread) for _ in range(n)]


# ------------------------------------------------------------ param curves

def _primitive_random(rng, spread=3):
    while True:
        v = (rng.randint(-spread, spread), rng.randint(-spread, spread))
        if v != (0, 0) and gcd(*v) == 1:
            return v


def random_tree_curve(rng: random.Random, splits: int = 3) -> ParamCurve:
    """A balanced rational plane curve grown from a trivalent star by
    repeatedly replacing an end with an edge ending in a new trivalent node."""
    while True:
        d1, d2 = _primitive_random(rng), _primitive_random(rng)
        d3 = (-d1[0] - d2[0], -d1[1] - d2[1])
        if d3 != (0, 0) and gcd(*d3) == 1 and d1[0] * d2[1] != d1[1] * d2[0]:
            break
    positions = [(Fraction(rng.randint(-3, 3)), Fraction(rng.randint(-3, 3)))]
    edges: list[Edge] = []
    ends = [End(0, d1), End(0, d2), End(0, d3)]
    for _ in range(splits):
        k = rng.randrange(len(ends))
        r = ends[k]
        d = r.direction
        for _ in range(50):
            a = _primitive_random(rng)
            b = (d[0] - a[0], d[1] - a[1])
            if b != (0, 0) and gcd(*b) == 1 and a[0] * d[1] != a[1] * d[0]:
                break
        else:
            continue
        length = Fraction(rng.randint(1, 6), rng.randint(1, 3))
        p = positions[r.node]
        positions.append((p[0] + length * d[0], p[1] + length * d[1]))
        u = len(positions) - 1
        edges.append(Edge(r.node, u, d, 1, length))
        ends[k:k + 1] = [End(u, a), End(u, b)]
    return ParamCurve(2, tuple(positions), tuple(edges), tuple(ends))


def random_marking(rng: random.Random, c: ParamCurve) -> EndMarking:
    marks = []
    for i, r in enumerate(c.ends):
        t = Fraction(rng.randint(1, 20), rng.randint(1, 7))
        p = c.positions[r.node]
        marks.append((i, tuple(x + t * d for x, d in zip(p, r.direction))))
    return EndMarking(tuple(marks))
