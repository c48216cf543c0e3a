"""Subdivisions of lattice polytopes, tropical polynomials and their dual complexes.

A :class:`Subdivision` is a list of lattice points (its vertex set) and a
list of cells, each an index list into the vertex set.  Coefficients use the
max convention: N_f(x) = max(<w, x> + c_w).  A cell ``d`` is induced by ``c``
when some affine function ``phi_d`` agrees with ``c`` on the vertices of ``d``
and lies strictly above ``c`` at every other vertex.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

from . import geometry as geo
from .errors import DimensionMismatch, InvalidCell, NonInterior, NonRegular, TropRankError
from .linalg import Matrix, solve, solve_homogeneous
from .lp import maximize, maximize_free


@dataclass(frozen=True)
class Cell:
    vertex_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertex_indices", tuple(int(i) for i in self.vertex_indices))

    def __len__(self):
        return len(self.vertex_indices)


@dataclass(frozen=True)
class Subdivision:
    n: int
    vertices: tuple[tuple[int, ...], ...]
    cells: tuple[Cell, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(tuple(int(x) for x in v) for v in self.vertices))
        object.__setattr__(self, "cells", tuple(c if isinstance(c, Cell) else Cell(tuple(c)) for c in self.cells))
        for v in self.vertices:
            if len(v) != self.n:
                raise DimensionMismatch(f"vertex {v} is not in dimension {self.n}")

    @classmethod
    def build(cls, vertices, cells, n: int | None = None) -> "Subdivision":
        vertices = [tuple(v) for v in vertices]
        if n is None:
            n = len(vertices[0])
        return cls(n, tuple(vertices), tuple(Cell(tuple(c)) for c in cells))

    def cell_points(self, i: int) -> list[tuple[int, ...]]:
        return [self.vertices[j] for j in self.cells[i].vertex_indices]

    def cell_class(self, i: int) -> geo.PolygonClass:
        return _cell_classes(self)[i]

    def nontrivial_cells(self) -> list[int]:
        return [i for i, c in enumerate(_cell_classes(self)) if not c.trivial]

    def transformed(self, U: Sequence[Sequence[int]], t: Sequence[int]) -> "Subdivision":
        """Image under x -> U x + t (U should be unimodular to stay a lattice map)."""
        verts = tuple(tuple(sum(U[i][j] * v[j] for j in range(self.n)) + t[i] for i in range(self.n))
                      for v in self.vertices)
        return Subdivision(self.n, verts, self.cells)


@lru_cache(maxsize=4096)
def _cell_classes(s: Subdivision) -> tuple[geo.PolygonClass, ...]:
    return tuple(geo.classify_cell(s.cell_points(i), s.n) for i in range(len(s.cells)))


@dataclass(frozen=True)
class TropicalPolynomial:
    """Coefficients c_w aligned with the vertex list of a subdivision."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    def __getitem__(self, i):
        return self.coefficients[i]

    def __len__(self):
        return len(self.coefficients)


# ------------------------------------------------------------------ validation

@dataclass(frozen=True)
class Violation:
    kind: str
    cells: tuple[int, ...]
    message: str

    def __str__(self):
        return f"{self.kind} {list(self.cells)}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind, cells, message):
        self.violations.append(Violation(kind, tuple(cells), message))

    def __str__(self):
        return "ok" if self.ok else "\n".join(str(v) for v in self.violations)


def _separable(s: Subdivision, i: int, j: int) -> bool:
    """Is there a hyperplane containing the shared vertices with the rest of
    cell i strictly on one side and the rest of cell j strictly on the other?"""
    a = set(s.cells[i].vertex_indices)
    b = set(s.cells[j].vertex_indices)
    shared = a & b
    n = s.n
    # variables: u (n, free), beta (free), t >= 0
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for v in sorted(shared):
        A_eq.append(list(s.vertices[v]) + [-1, 0])
        b_eq.append(0)
    for v in sorted(a - shared):
        A_ub.append(list(s.vertices[v]) + [-1, 1])
        b_ub.append(0)
    for v in sorted(b - shared):
        A_ub.append([-x for x in s.vertices[v]] + [1, 1])
        b_ub.append(0)
    A_ub.append([0] * (n + 1) + [1])
    b_ub.append(1)
    res = maximize_free([0] * (n + 1) + [1], A_ub, b_ub, A_eq, b_eq, free=range(n + 1))
    return res.status == "optimal" and res.value > 0


def _boxes_apart(s: Subdivision, i: int, j: int) -> bool:
    P, Q = s.cell_points(i), s.cell_points(j)
    for k in range(s.n):
        if max(p[k] for p in P) < min(q[k] for q in Q) or max(q[k] for q in Q) < min(p[k] for p in P):
            return True
    return False


def validate(s: Subdivision) -> ValidationReport:
    """Check every structural invariant; violations are returned, not raised."""
    rep = ValidationReport()
    n = s.n
    if n < 1:
        rep.add("dimension", (), "ambient dimension must be at least 1")
        return rep
    if len(set(s.vertices)) != len(s.vertices):
        dup = [i for i, v in enumerate(s.vertices) if s.vertices.index(v) != i]
        rep.add("duplicate-vertex", (), f"repeated vertex indices {dup}")
    used = set()
    good_cells = []
    for ci, cell in enumerate(s.cells):
        idx = cell.vertex_indices
        if any(i < 0 or i >= len(s.vertices) for i in idx):
            rep.add("bad-index", (ci,), "vertex index out of range")
            continue
        used.update(idx)
        if len(set(idx)) != len(idx):
            rep.add("repeated-index", (ci,), "cell lists a vertex twice")
            continue
        pts = s.cell_points(ci)
        if len(idx) < n + 1 or geo.affine_dim(pts) != n:
            rep.add("degenerate-cell", (ci,), f"cell does not span dimension {n}")
            continue
        if n == 2:
            try:
                geo.convex_cyclic_order(pts)
            except InvalidCell as e:
                rep.add("non-convex-cell", (ci,), str(e))
                continue
        elif len(geo.hull_vertices(pts)) != len(pts):
            rep.add("non-convex-cell", (ci,), "some listed vertex is not a vertex of the cell")
            continue
        good_cells.append(ci)
    unused = sorted(set(range(len(s.vertices))) - used)
    if unused:
        rep.add("unused-vertex", (), f"vertices {unused} belong to no cell")
    if not rep.ok:
        return rep
    if n in (2, 3):
        total = sum(geo.normalized_volume(s.cell_points(i)) for i in range(len(s.cells)))
        hull = geo.normalized_volume(list(s.vertices))
        if total != hull:
            rep.add("covering", tuple(range(len(s.cells))),
                    f"cell volumes sum to {total} but the hull has volume {hull} (normalised)")
    for i, j in combinations(range(len(s.cells)), 2):
        if _boxes_apart(s, i, j):
            continue
        if not _separable(s, i, j):
            rep.add("non-face-intersection", (i, j), "cells do not meet in a common face")
    return rep


def require_valid(s: Subdivision) -> None:
    rep = validate(s)
    if not rep.ok:
        raise InvalidCell(str(rep))


# ------------------------------------------------------------------ evaluation

def tropical_eval(f: TropicalPolynomial, s: Subdivision, x: Sequence) -> tuple[Fraction, set[int]]:
    if len(x) != s.n:
        raise DimensionMismatch(f"point of dimension {len(x)} for a subdivision in dimension {s.n}")
    x = [Fraction(v) for v in x]
    vals = [geo.dot(w, x) + f[i] for i, w in enumerate(s.vertices)]
    best = max(vals)
    return best, {i for i, v in enumerate(vals) if v == best}


# ---------------------------------------------------------- anchors & systems

@lru_cache(maxsize=4096)
def cell_anchors(s: Subdivision) -> tuple[tuple[tuple[int, ...], tuple[tuple[int, tuple[Fraction, ...]], ...]], ...]:
    """Per cell: anchor vertex indices and, for every other vertex, its
    affine coordinates with respect to the anchors.

    Anchors are chosen greedily in increasing vertex index order, which gives
    the lexicographically smallest affinely independent (n+1)-subset.
    """
    out = []
    for ci, cell in enumerate(s.cells):
        idx = sorted(cell.vertex_indices)
        pts = [s.vertices[i] for i in idx]
        sel = geo.independent_subset(pts)
        if len(sel) != s.n + 1:
            raise InvalidCell(f"cell {ci} is not full dimensional")
        anchors = tuple(idx[k] for k in sel)
        apts = [s.vertices[a] for a in anchors]
        rest = tuple((w, geo.barycentric(apts, s.vertices[w])) for w in idx if w not in anchors)
        out.append((anchors, rest))
    return tuple(out)


def condition_rows(s: Subdivision, cells: Sequence[int] | None = None) -> list[tuple[Fraction, ...]]:
    """Linear conditions on c saying each cell's lift is affine."""
    V = len(s.vertices)
    rows = []
    anchors = cell_anchors(s)
    for ci in (range(len(s.cells)) if cells is None else cells):
        anc, rest = anchors[ci]
        for w, lam in rest:
            row = [Fraction(0)] * V
            for a, l in zip(anc, lam):
                row[a] += l
            row[w] -= 1
            rows.append(tuple(row))
    return rows


def condition_matrix(s: Subdivision) -> Matrix:
    return Matrix.from_rows(condition_rows(s), len(s.vertices))


def affine_on_cell(s: Subdivision, c: Sequence, ci: int) -> tuple[Fraction, tuple[Fraction, ...]]:
    """(constant, gradient) of the affine function through the lifted anchors of cell ci."""
    anc, _ = cell_anchors(s)[ci]
    rows = [[Fraction(1)] + [Fraction(x) for x in s.vertices[a]] for a in anc]
    sol = solve(rows, [Fraction(c[a]) for a in anc])
    return sol[0], tuple(sol[1:])


def _phi(aff, w):
    const, grad = aff
    return const + geo.dot(grad, w)


# --------------------------------------------------------------- adjacency

@dataclass(frozen=True)
class CellFacet:
    cell: int
    vertices: frozenset  # global vertex indices
    normal: tuple[int, ...]  # primitive outward normal of the cell
    neighbour: int | None


@lru_cache(maxsize=4096)
def cell_facets(s: Subdivision) -> tuple[tuple[CellFacet, ...], ...]:
    """Facets of every cell, each tagged with the cell on its other side."""
    raw = []
    owners: dict[frozenset, list[int]] = {}
    for ci, cell in enumerate(s.cells):
        idx = cell.vertex_indices
        fs = []
        for f in geo.facets(s.cell_points(ci)):
            key = frozenset(idx[k] for k in f.indices)
            fs.append((key, f.normal))
            owners.setdefault(key, []).append(ci)
        raw.append(fs)
    out = []
    for ci, fs in enumerate(raw):
        row = []
        for key, normal in fs:
            others = [o for o in owners[key] if o != ci]
            row.append(CellFacet(ci, key, normal, others[0] if others else None))
        out.append(tuple(row))
    return tuple(out)


def adjacent_pairs(s: Subdivision) -> list[tuple[int, int, frozenset]]:
    """Pairs of cells sharing a facet, with the shared vertex set."""
    out = []
    for row in cell_facets(s):
        for f in row:
            if f.neighbour is not None and f.cell < f.neighbour:
                out.append((f.cell, f.neighbour, f.vertices))
    return out


# ------------------------------------------------------------ interior lifts

def certify_interior(s: Subdivision, f: TropicalPolynomial) -> list[tuple[Fraction, tuple[Fraction, ...]]]:
    """Return the affine function of every cell, or raise NonInterior."""
    if len(f) != len(s.vertices):
        raise NonInterior("coefficient vector does not match the vertex count")
    affs = []
    for ci, cell in enumerate(s.cells):
        aff = affine_on_cell(s, f.coefficients, ci)
        members = set(cell.vertex_indices)
        for w, pt in enumerate(s.vertices):
            val = _phi(aff, pt)
            if w in members and val != f[w]:
                raise NonInterior(f"lift is not affine on cell {ci} (vertex {w})")
            if w not in members and not val > f[w]:
                raise NonInterior(f"vertex {w} is not strictly below the lift of cell {ci}")
        affs.append(aff)
    return affs


def is_interior(s: Subdivision, f: TropicalPolynomial) -> bool:
    try:
        certify_interior(s, f)
    except NonInterior:
        return False
    return True


def _normalise(c: Sequence[Fraction]) -> tuple[Fraction, ...]:
    den = lcm(*(Fraction(x).denominator for x in c)) if c else 1
    ints = [int(Fraction(x) * den) for x in c]
    lo = min(ints) if ints else 0
    ints = [x - lo for x in ints]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    return tuple(Fraction(x) for x in ints)


@lru_cache(maxsize=4096)
def pick_interior_coefficients(s: Subdivision) -> TropicalPolynomial:
    """A coefficient vector inducing exactly ``s``, found by exact LP.

    Raises NonRegular when no such vector exists.
    """
    V = len(s.vertices)
    pairs = adjacent_pairs(s)
    if not pairs:
        f = TropicalPolynomial(tuple(Fraction(0) for _ in range(V)))
        certify_interior(s, f)
        return f
    basis = solve_homogeneous(condition_matrix(s))
    k = len(basis)
    anchors = cell_anchors(s)
    # slack(y) = phi_d(w) - c_w for one vertex w across each interior facet
    A_ub, b_ub = [], []
    for a, b, shared in pairs:
        for d, e in ((a, b), (b, a)):
            w = min(set(s.cells[e].vertex_indices) - shared)
            anc, _ = anchors[d]
            lam = geo.barycentric([s.vertices[x] for x in anc], s.vertices[w])
            coef = [Fraction(0)] * V
            for x, l in zip(anc, lam):
                coef[x] += l
            coef[w] -= 1
            row = [-sum((coef[v] * B[v] for v in range(V)), Fraction(0)) for B in basis]
            A_ub.append(row + [Fraction(1)])
            b_ub.append(0)
    A_ub.append([0] * k + [1])
    b_ub.append(1)
    res = maximize_free([0] * k + [1], A_ub, b_ub, free=range(k))
    if res.status != "optimal" or res.value <= 0:
        raise NonRegular("no coefficient vector induces this subdivision")
    y = res.x[:k]
    c = [sum((y[j] * basis[j][v] for j in range(k)), Fraction(0)) for v in range(V)]
    f = TropicalPolynomial(_normalise(c))
    try:
        certify_interior(s, f)
    except NonInterior as e:
        raise NonRegular(f"locally convex lift failed the global check: {e}") from e
    return f


def is_regular(s: Subdivision) -> bool:
    try:
        pick_interior_coefficients(s)
    except NonRegular:
        return False
    return True


# ------------------------------------------------------------- dual complex

@dataclass(frozen=True)
class DualEdge:
    cells: tuple[int, int]
    facet: frozenset
    direction: tuple[int, ...]  # primitive, from cells[0] towards cells[1]
    weight: int
    length: Fraction


@dataclass(frozen=True)
class DualRay:
    cell: int
    facet: frozenset
    direction: tuple[int, ...]
    weight: int


@dataclass
class DualComplex:
    positions: list[tuple[Fraction, ...]]
    edges: list[DualEdge]
    rays: list[DualRay]

    def incident(self, ci: int) -> list[tuple[tuple[int, ...], int]]:
        """(outgoing primitive direction, weight) of every edge and ray at cell ci."""
        out = []
        for e in self.edges:
            if e.cells[0] == ci:
                out.append((e.direction, e.weight))
            elif e.cells[1] == ci:
                out.append((tuple(-x for x in e.direction), e.weight))
        for r in self.rays:
            if r.cell == ci:
                out.append((r.direction, r.weight))
        return out


def dual_complex(s: Subdivision, f: TropicalPolynomial) -> DualComplex:
    """Vertices, edges and rays of the tropical hypersurface of ``f``."""
    affs = certify_interior(s, f)
    pos = [tuple(-g for g in grad) for _, grad in affs]
    edges, rays = [], []
    for row in cell_facets(s):
        for fc in row:
            w = geo.lattice_volume([s.vertices[v] for v in sorted(fc.vertices)])
            if fc.neighbour is None:
                rays.append(DualRay(fc.cell, fc.vertices, fc.normal, w))
            elif fc.cell < fc.neighbour:
                diff = geo.sub(pos[fc.neighbour], pos[fc.cell])
                nz = next(k for k, u in enumerate(fc.normal) if u != 0)
                t = diff[nz] / fc.normal[nz]
                if t <= 0 or any(d != t * u for d, u in zip(diff, fc.normal)):
                    raise TropRankError("dual edge is not along the facet normal")
                edges.append(DualEdge((fc.cell, fc.neighbour), fc.vertices, fc.normal, w, t))
    dc = DualComplex(pos, edges, rays)
    for ci in range(len(s.cells)):
        total = [0] * s.n
        for d, w in dc.incident(ci):
            total = [a + w * b for a, b in zip(total, d)]
        if any(total):
            raise TropRankError(f"balancing fails at the vertex dual to cell {ci}")
    return dc


# ------------------------------------------------------ subdivisions from lifts

def regular_subdivision(points: Sequence[Sequence[int]], heights: Sequence) -> Subdivision:
    """The subdivision induced by lifting ``points[i]`` to ``heights[i]``.

    Cells are the maximal faces of the upper hull; vertices are the points
    that are vertices of some cell.  Points strictly under the hull, or in
    the relative interior of a cell face, are dropped.
    """
    pts = [tuple(int(x) for x in p) for p in points]
    h = [Fraction(x) for x in heights]
    n = len(pts[0])
    N = len(pts)
    if geo.affine_dim(pts) != n:
        raise InvalidCell("points do not span the ambient space")
    centroid = [Fraction(sum(p[k] for p in pts), N) for k in range(n)]
    A_eq = [[p[k] for p in pts] for k in range(n)] + [[1] * N]
    res = maximize(h, A_eq=A_eq, b_eq=centroid + [1])
    basis = list(res.basis)
    if len(basis) < n + 1:
        # degenerate basis: complete it to an affinely independent set on the same face
        basis = geo.independent_subset(pts, basis + [i for i in range(N) if i not in basis])
    # the LP basis points may be affinely dependent only if the LP dropped rows
    sol = solve([[Fraction(1)] + list(map(Fraction, pts[i])) for i in basis[: n + 1]],
                [h[i] for i in basis[: n + 1]])

    def touching(aff):
        return frozenset(i for i in range(N) if _phi(aff, pts[i]) == h[i])

    start = (sol[0], tuple(sol[1:]))
    for i in range(N):
        if _phi(start, pts[i]) < h[i]:
            raise AssertionError("start function is not supporting")
    seen = {touching(start): start}
    queue = deque([touching(start)])
    while queue:
        key = queue.popleft()
        aff = seen[key]
        idx = sorted(key)
        cell_pts = [pts[i] for i in idx]
        for fct in geo.facets(cell_pts):
            def ell(x, fct=fct):
                return geo.dot(fct.normal, x) - fct.offset
            beyond = [i for i in range(N) if ell(pts[i]) > 0]
            if not beyond:
                continue
            step = min((_phi(aff, pts[i]) - h[i]) / ell(pts[i]) for i in beyond)
            new = (aff[0] + step * fct.offset, tuple(g - step * u for g, u in zip(aff[1], fct.normal)))
            nk = touching(new)
            if nk not in seen:
                seen[nk] = new
                queue.append(nk)
    cells_raw = []
    for key in seen:
        idx = sorted(key)
        hv = geo.hull_vertices([pts[i] for i in idx])
        cells_raw.append(tuple(idx[k] for k in hv))
    used = sorted({i for c in cells_raw for i in c})
    remap = {old: new for new, old in enumerate(used)}
    cells = sorted(tuple(sorted(remap[i] for i in c)) for c in cells_raw)
    return Subdivision(n, tuple(pts[i] for i in used), tuple(Cell(c) for c in cells))


def regular_subdivision_with_lift(points, heights) -> tuple[Subdivision, TropicalPolynomial]:
    """Like :func:`regular_subdivision` but also returns the restricted heights."""
    s = regular_subdivision(points, heights)
    lookup = {tuple(p): Fraction(h) for p, h in zip(points, heights)}
    return s, TropicalPolynomial(tuple(lookup[v] for v in s.vertices))
