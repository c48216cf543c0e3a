"""Lattice point and polytope primitives.

Points are tuples of ints (or Fractions where positions of dual objects are
involved).  All predicates are exact; nothing here touches floating point.
Convex hulls are computed by brute force over affinely independent subsets,
which is fine for the handful of vertices a cell carries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .errors import DegenerateCell, DimensionMismatch, GenericityError, InvalidCell
from .linalg import int_det, matrix_rank, solve

Point = tuple[int, ...]


def _check_dims(points: Sequence[Sequence]) -> int | None:
    dims = {len(p) for p in points}
    if len(dims) > 1:
        raise DimensionMismatch(f"points of mixed dimensions {sorted(dims)}")
    return dims.pop() if dims else None


def sub(p: Sequence, q: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(p, q))


def dot(p: Sequence, q: Sequence):
    return sum(a * b for a, b in zip(p, q))


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return tuple(int(x) // g for x in v)


def primitive_rational(v: Sequence) -> tuple[tuple[int, ...], Fraction]:
    """Write a nonzero rational vector as ``scale * primitive`` with scale > 0."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    p = primitive(ints)
    g = next(a // b for a, b in zip(ints, p) if b != 0)
    return p, Fraction(g, den)


def affine_dim(points: Sequence[Sequence]) -> int:
    """Dimension of the affine hull; -1 for no points."""
    _check_dims(points)
    if not points:
        return -1
    base = points[0]
    return matrix_rank([sub(p, base) for p in points[1:]]) if len(points) > 1 else 0


def independent_subset(points: Sequence[Sequence], order: Iterable[int] | None = None) -> list[int]:
    """Greedy maximal affinely independent subset, scanning ``order``."""
    order = list(range(len(points))) if order is None else list(order)
    chosen: list[int] = []
    for i in order:
        trial = chosen + [i]
        if affine_dim([points[j] for j in trial]) == len(trial) - 1:
            chosen = trial
    return chosen


def barycentric(anchors: Sequence[Sequence], w: Sequence) -> tuple[Fraction, ...]:
    """Affine coordinates of ``w`` with respect to affinely independent ``anchors``."""
    k = len(anchors)
    n = len(w)
    rows = [[Fraction(anchors[j][i]) for j in range(k)] for i in range(n)]
    rows.append([Fraction(1)] * k)
    lam = solve(rows, [Fraction(x) for x in w] + [Fraction(1)])
    if lam is None:
        raise ValueError("point is not in the affine hull of the anchors")
    return lam


def hyperplane_normal(points: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Integer normal of the hyperplane through ``n`` points of Z^n (zero if dependent)."""
    n = len(points[0])
    vecs = [sub(p, points[0]) for p in points[1:]]
    normal = []
    for j in range(n):
        minor = [[v[c] for c in range(n) if c != j] for v in vecs]
        normal.append((-1) ** j * int_det(minor))
    return tuple(normal)


def _projection_coords(points: Sequence[Sequence], d: int) -> tuple[int, ...]:
    """Coordinate subset on which the projection keeps affine dimension ``d``."""
    n = len(points[0])
    for J in combinations(range(n), d):
        if affine_dim([tuple(p[j] for j in J) for p in points]) == d:
            return J
    raise AssertionError("no faithful coordinate projection")


@dataclass(frozen=True)
class Facet:
    indices: frozenset
    normal: tuple  # outward, primitive (in projected coordinates when lower dimensional)
    offset: int


def _facets_fulldim(points: tuple) -> list[Facet]:
    n = len(points[0])
    found: list[Facet] = []
    for S in combinations(range(len(points)), n):
        if any(set(S) <= f.indices for f in found):
            continue
        normal = hyperplane_normal([points[i] for i in S])
        if not any(normal):
            continue
        off = dot(normal, points[S[0]])
        vals = [dot(normal, p) - off for p in points]
        if all(v <= 0 for v in vals):
            sign = 1
        elif all(v >= 0 for v in vals):
            sign = -1
        else:
            continue
        normal = primitive(tuple(sign * x for x in normal))
        found.append(Facet(frozenset(i for i, v in enumerate(vals) if v == 0), normal, dot(normal, points[S[0]])))
    return sorted(found, key=lambda f: sorted(f.indices))


@lru_cache(maxsize=65536)
def _facets_cached(points: tuple) -> tuple:
    d = affine_dim(points)
    if d <= 0:
        return ()
    n = len(points[0])
    if d < n:
        J = _projection_coords(points, d)
        proj = tuple(tuple(p[j] for j in J) for p in points)
        return tuple(_facets_cached(_integral(proj)))
    return tuple(_facets_fulldim(_integral(points)))


def _integral(points: tuple) -> tuple:
    """Scale rational points to integers (facets are scale invariant)."""
    den = 1
    for p in points:
        for x in p:
            if isinstance(x, Fraction):
                den = den * x.denominator // gcd(den, x.denominator)
    if den == 1:
        return tuple(tuple(int(x) for x in p) for p in points)
    return tuple(tuple(int(Fraction(x) * den) for x in p) for p in points)


def facets(points: Sequence[Sequence]) -> list[Facet]:
    """Facets of conv(points) inside its affine hull.

    Each facet lists the indices of *all* input points on it.  For point
    sets that are not full dimensional the normals live in a coordinate
    projection and should only be used for orientation tests within that
    projection.
    """
    _check_dims(points)
    return list(_facets_cached(tuple(tuple(p) for p in points)))


def hull_vertices(points: Sequence[Sequence]) -> list[int]:
    """Indices of the points that are vertices of their convex hull."""
    d = affine_dim(points)
    if d <= 0:
        return list(range(len(points))) if len(points) == 1 else ([0] if points else [])
    fs = facets(points)
    out = []
    for i in range(len(points)):
        inter = None
        for f in fs:
            if i in f.indices:
                inter = set(f.indices) if inter is None else inter & f.indices
        if inter == {i}:
            out.append(i)
    return out


def in_convex_position(points: Sequence[Sequence]) -> bool:
    return len(set(map(tuple, points))) == len(points) and len(hull_vertices(points)) == len(points)


def faces(points: Sequence[Sequence]) -> list[frozenset]:
    """All nonempty proper faces (as index sets) plus the polytope itself."""
    fs = [f.indices for f in facets(points)]
    verts = set(hull_vertices(points))
    out = {frozenset(range(len(points)))}
    frontier = set(fs)
    while frontier:
        out |= frontier
        nxt = set()
        for a in frontier:
            for b in fs:
                c = a & b
                if c and c not in out and c & verts:
                    nxt.add(c)
        frontier = nxt
    return sorted(out, key=lambda f: (len(f), sorted(f)))


def triangulate(points: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Pulling triangulation of conv(points) using only hull vertices."""
    verts = hull_vertices(points)
    return _pull(tuple(tuple(p) for p in points), tuple(verts))


def _pull(points: tuple, idx: tuple) -> list[tuple[int, ...]]:
    sub_pts = [points[i] for i in idx]
    d = affine_dim(sub_pts)
    if d == 0:
        return [(idx[0],)]
    v = min(idx)
    out = []
    for f in facets(sub_pts):
        fidx = tuple(idx[i] for i in sorted(f.indices))
        if v in fidx:
            continue
        fverts = hull_vertices([points[i] for i in fidx])
        for s in _pull(points, tuple(fidx[i] for i in fverts)):
            out.append((v,) + s)
    return out


def normalized_volume(points: Sequence[Sequence[int]]) -> int:
    """n! times the Euclidean volume of a full dimensional lattice polytope."""
    n = len(points[0])
    if affine_dim(points) < n:
        return 0
    total = 0
    for s in triangulate(points):
        base = points[s[0]]
        total += abs(int_det([sub(points[i], base) for i in s[1:]]))
    return total


def lattice_volume(points: Sequence[Sequence[int]]) -> int:
    """Normalised lattice volume of a polytope of any dimension k in Z^n.

    For a k-simplex this is the gcd of the k x k minors of its edge matrix;
    a segment gets its lattice length, a full dimensional simplex k!·vol.
    """
    d = affine_dim(points)
    if d <= 0:
        return 1
    total = 0
    for s in triangulate(points):
        base = points[s[0]]
        edges = [sub(points[i], base) for i in s[1:]]
        n = len(base)
        g = 0
        for J in combinations(range(n), d):
            g = gcd(g, int_det([[e[j] for j in J] for e in edges]))
        total += g
    return total


# --------------------------------------------------------------------- 2D cells

def cross(o: Sequence, a: Sequence, b: Sequence):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_cyclic_order(points: Sequence[Sequence[int]]) -> list[int]:
    """Counter-clockwise order of planar points in strictly convex position."""
    if len(points) < 3 or len(set(map(tuple, points))) != len(points):
        raise InvalidCell("need at least three distinct points")
    idx = sorted(range(len(points)), key=lambda i: tuple(points[i]))

    def half(seq):
        h: list[int] = []
        for i in seq:
            while len(h) >= 2 and cross(points[h[-2]], points[h[-1]], points[i]) <= 0:
                h.pop()
            h.append(i)
        return h

    lower, upper = half(idx), half(reversed(idx))
    hull = lower[:-1] + upper[:-1]
    if len(hull) != len(points):
        raise InvalidCell("points are not in strictly convex position")
    return hull


@dataclass(frozen=True)
class PolygonClass:
    """Combinatorial type of a cell.

    ``m`` is half the vertex count (rounded down) for polygons and None for
    the other kinds.
    """

    kind: str
    m: int | None = None

    TRIANGLE = "Triangle"
    PARALLELOGRAM = "Parallelogram"
    PARALLEL_EVEN = "ParallelEvenGon"
    EVEN_NONPARALLEL = "EvenGonNonParallel"
    ODD = "OddGon"
    SIMPLEX = "Simplex"
    NONSIMPLEX = "NonSimplex"

    def __str__(self):
        return self.kind if self.m is None or self.kind in (self.TRIANGLE, self.PARALLELOGRAM) \
            else f"{self.kind}({self.m})"

    @property
    def trivial(self) -> bool:
        """Triangles, parallelograms and simplices impose no unexpected conditions."""
        return self.kind in (self.TRIANGLE, self.PARALLELOGRAM, self.SIMPLEX)


def classify_polygon_2d(vertices: Sequence[Sequence[int]]) -> PolygonClass:
    """Classify a polygon given by its vertices in cyclic order."""
    _check_dims(vertices)
    k = len(vertices)
    order = convex_cyclic_order(vertices)
    # the given order must be the convex order up to rotation and reflection
    pos = order.index(0)
    rot = order[pos:] + order[:pos]
    if rot != list(range(k)) and [rot[0]] + rot[1:][::-1] != list(range(k)):
        raise InvalidCell("vertices are not given in cyclic order")
    if k == 3:
        return PolygonClass(PolygonClass.TRIANGLE, 1)
    edges = [sub(vertices[(i + 1) % k], vertices[i]) for i in range(k)]
    if k % 2:
        return PolygonClass(PolygonClass.ODD, k // 2)
    m = k // 2
    parallel = all(edges[i][0] * edges[i + m][1] - edges[i][1] * edges[i + m][0] == 0 for i in range(m))
    if parallel:
        return PolygonClass(PolygonClass.PARALLELOGRAM, 2) if m == 2 else PolygonClass(PolygonClass.PARALLEL_EVEN, m)
    return PolygonClass(PolygonClass.EVEN_NONPARALLEL, m)


def is_simplex(vertices: Sequence[Sequence[int]], n: int) -> bool:
    if len(vertices) < n + 1:
        raise DegenerateCell(f"{len(vertices)} vertices cannot span dimension {n}")
    d = affine_dim(vertices)
    if len(vertices) == n + 1 and d < n:
        raise DegenerateCell("n+1 vertices with affine dimension below n")
    return len(vertices) == n + 1 and d == n


def classify_cell(vertices: Sequence[Sequence[int]], n: int) -> PolygonClass:
    """Polygon class in the plane, simplex/non-simplex in higher dimension."""
    if n == 2:
        return classify_polygon_2d([vertices[i] for i in convex_cyclic_order(vertices)])
    return PolygonClass(PolygonClass.SIMPLEX if is_simplex(vertices, n) else PolygonClass.NONSIMPLEX)


# ------------------------------------------------------- generic directions

def edge_vectors(cells: Sequence[Sequence[Sequence[int]]]) -> set[tuple]:
    out = set()
    for cell in cells:
        for a, b in combinations(cell, 2):
            out.add(sub(b, a))
    return out


def facet_normals(cells: Sequence[Sequence[Sequence[int]]]) -> set[tuple]:
    out = set()
    for cell in cells:
        for f in facets(cell):
            out.add(f.normal)
    return out


def is_generic(a: Sequence, cells: Sequence[Sequence[Sequence[int]]]) -> bool:
    return all(dot(a, e) != 0 for e in edge_vectors(cells)) and \
        all(dot(a, v) != 0 for v in facet_normals(cells))


def generic_vector(cells: Sequence[Sequence[Sequence[int]]]) -> tuple[Fraction, ...]:
    """Deterministic rational stand-in for a direction of irrational slope.

    Starts from (1, K, K^2, ...) with K = 1 + 2 * max|coordinate| and bumps
    K until no edge vector or facet normal of any cell is orthogonal to it.
    """
    n = len(cells[0][0])
    big = max(abs(x) for cell in cells for p in cell for x in p)
    K = 1 + 2 * big
    edges = edge_vectors(cells)
    normals = facet_normals(cells)
    while True:
        a = tuple(Fraction(K) ** i for i in range(n))
        if all(dot(a, e) != 0 for e in edges) and all(dot(a, v) != 0 for v in normals):
            return a
        K += 1


def shared_facet_normal(cell_a: Sequence[Sequence[int]], cell_b: Sequence[Sequence[int]]):
    """Outward normal of ``cell_a`` on the facet it shares with ``cell_b`` (None if none)."""
    shared = [p for p in cell_a if tuple(p) in {tuple(q) for q in cell_b}]
    n = len(cell_a[0])
    if affine_dim(shared) != n - 1:
        return None
    for f in facets(cell_a):
        if all(tuple(cell_a[i]) in {tuple(p) for p in shared} for i in f.indices) and \
                len(f.indices) == len(shared):
            return f.normal
    return None


def coorient_order(cells: Sequence[Sequence[Sequence[int]]], a: Sequence) -> list[int]:
    """Linear extension of the coorientation order induced by ``a``.

    Cell A precedes B when they share a facet whose normal, pointing from A
    into B, makes an acute angle with ``a``.  Ties among incomparable cells
    go to the smaller index.
    """
    n_cells = len(cells)
    succ: dict[int, set[int]] = {i: set() for i in range(n_cells)}
    indeg = [0] * n_cells
    for i, j in combinations(range(n_cells), 2):
        nrm = shared_facet_normal(cells[i], cells[j])
        if nrm is None:
            continue
        s = dot(nrm, a)
        if s == 0:
            raise GenericityError(f"direction is orthogonal to the facet between cells {i} and {j}")
        lo, hi = (i, j) if s > 0 else (j, i)
        if hi not in succ[lo]:
            succ[lo].add(hi)
            indeg[hi] += 1
    import heapq
    ready = [i for i in range(n_cells) if indeg[i] == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        i = heapq.heappop(ready)
        out.append(i)
        for j in sorted(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                heapq.heappush(ready, j)
    if len(out) != n_cells:
        raise GenericityError("coorientation relation has a cycle")
    return out
