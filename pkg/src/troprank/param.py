"""Parameterized tropical curves.

A :class:`ParamCurve` is an abstract graph with a balanced map to Q^n: every
node has a position, every bounded edge a primitive direction, a weight and
a length, and every end (unbounded ray) a node, a direction and a weight.
The deformation oracle works in the space of edge lengths plus a global
translation, cut down by the linear equations that keep the image closed
up and keep identified image points together.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from . import geometry as geo
from .errors import InconsistentIdentification, MarkerError, PreconditionError, TropRankError
from .linalg import Matrix, matrix_rank, solve_homogeneous
from .rank import COMPONENTS, RankReport, expected_rank_embedded, expected_rank_param
from .subdivision import Subdivision, TropicalPolynomial, dual_complex, pick_interior_coefficients


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    direction: tuple[int, ...]  # primitive, pointing from a to b
    weight: int
    length: Fraction

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(int(x) for x in self.direction))
        object.__setattr__(self, "length", Fraction(self.length))


@dataclass(frozen=True)
class End:
    node: int
    direction: tuple[int, ...]
    weight: int = 1

    def __post_init__(self):
        object.__setattr__(self, "direction", tuple(int(x) for x in self.direction))


@dataclass(frozen=True)
class ParamCurve:
    n: int
    positions: tuple[tuple[Fraction, ...], ...]
    edges: tuple[Edge, ...] = ()
    ends: tuple[End, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(tuple(Fraction(x) for x in p) for p in self.positions))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "ends", tuple(self.ends))

    @property
    def n_nodes(self) -> int:
        return len(self.positions)

    def valences(self) -> list[int]:
        val = [0] * self.n_nodes
        for e in self.edges:
            val[e.a] += 1
            val[e.b] += 1
        for r in self.ends:
            val[r.node] += 1
        return val

    def components(self) -> int:
        parent = list(range(self.n_nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            parent[find(e.a)] = find(e.b)
        return len({find(i) for i in range(self.n_nodes)})

    @property
    def genus(self) -> int:
        return len(self.edges) - self.n_nodes + self.components()

    def problems(self) -> list[str]:
        out = []
        for p in self.positions:
            if len(p) != self.n:
                out.append(f"position {p} is not in dimension {self.n}")
        for k, e in enumerate(self.edges):
            if not (0 <= e.a < self.n_nodes and 0 <= e.b < self.n_nodes):
                out.append(f"edge {k} has an unknown endpoint")
                continue
            if len(e.direction) != self.n or not any(e.direction) or geo.primitive(e.direction) != e.direction:
                out.append(f"edge {k} direction is not primitive")
                continue
            if e.weight < 1 or e.length <= 0:
                out.append(f"edge {k} needs positive weight and length")
            want = tuple(x + e.length * d for x, d in zip(self.positions[e.a], e.direction))
            if want != self.positions[e.b]:
                out.append(f"edge {k} length and direction do not match the node positions")
        for k, r in enumerate(self.ends):
            if not 0 <= r.node < self.n_nodes:
                out.append(f"end {k} has an unknown node")
                continue
            if len(r.direction) != self.n or not any(r.direction) or geo.primitive(r.direction) != r.direction:
                out.append(f"end {k} direction is not primitive")
            if r.weight < 1:
                out.append(f"end {k} needs positive weight")
        if out:
            return out
        for v in range(self.n_nodes):
            total = [0] * self.n
            for d, w in self.outgoing(v):
                total = [t + w * x for t, x in zip(total, d)]
            if any(total):
                out.append(f"node {v} is not balanced")
        if self.n_nodes and self.components() != 1:
            out.append("graph is not connected")
        return out

    def check(self) -> None:
        probs = self.problems()
        if probs:
            raise TropRankError("; ".join(probs))

    def outgoing(self, v: int) -> list[tuple[tuple[int, ...], int]]:
        out = []
        for e in self.edges:
            if e.a == v:
                out.append((e.direction, e.weight))
            if e.b == v:
                out.append((tuple(-x for x in e.direction), e.weight))
        for r in self.ends:
            if r.node == v:
                out.append((r.direction, r.weight))
        return out

    def scaled(self, k: Fraction) -> "ParamCurve":
        """Same combinatorics with every length and position multiplied by k > 0."""
        k = Fraction(k)
        pos = tuple(tuple(k * x for x in p) for p in self.positions)
        edges = tuple(Edge(e.a, e.b, e.direction, e.weight, k * e.length) for e in self.edges)
        return ParamCurve(self.n, pos, edges, self.ends)


def expected_rank_of_curve(c: ParamCurve) -> int:
    return expected_rank_param(len(c.ends), c.n, c.genus, c.valences())


@dataclass(frozen=True)
class VertexVertex:
    a: int
    b: int


@dataclass(frozen=True)
class VertexEdge:
    node: int
    edge: int


Identification = Union[VertexVertex, VertexEdge]


@dataclass(frozen=True)
class EndMarking:
    markers: tuple[tuple[int, tuple[Fraction, ...]], ...]

    def __post_init__(self):
        object.__setattr__(self, "markers", tuple((int(i), tuple(Fraction(x) for x in p))
                                                  for i, p in self.markers))


# ------------------------------------------------------------------ the oracle

def _position_forms(c: ParamCurve) -> tuple[list[list[list[Fraction]]], list[int]]:
    """Node positions as linear forms in (lengths, translation).

    Returns per node an n x (E + n) coefficient array and the list of
    bounded edges not used by the spanning tree.
    """
    E, n = len(c.edges), c.n
    width = E + n
    forms: list = [None] * c.n_nodes
    root = [[Fraction(int(j == E + k)) for j in range(width)] for k in range(n)]
    forms[0] = root
    tree = set()
    frontier = [0]
    while frontier:
        nxt = []
        for v in frontier:
            for k, e in enumerate(c.edges):
                if k in tree:
                    continue
                if e.a == v and forms[e.b] is None:
                    sign, w = 1, e.b
                elif e.b == v and forms[e.a] is None:
                    sign, w = -1, e.a
                else:
                    continue
                tree.add(k)
                f = [row[:] for row in forms[v]]
                for i in range(n):
                    f[i][k] += sign * e.direction[i]
                forms[w] = f
                nxt.append(w)
        frontier = sorted(nxt)
    if any(f is None for f in forms):
        raise PreconditionError("curve graph is not connected")
    return forms, [k for k in range(E) if k not in tree]


def _normals(d: Sequence[int]) -> list[tuple[Fraction, ...]]:
    """A basis of the vectors orthogonal to ``d``."""
    return solve_homogeneous([list(d)])


def identification_matrix(c: ParamCurve, idents: Sequence[Identification]) -> Matrix:
    forms, extra = _position_forms(c)
    E, n = len(c.edges), c.n
    width = E + n
    rows: list[list[Fraction]] = []
    for k in extra:
        e = c.edges[k]
        for i in range(n):
            row = [forms[e.b][i][j] - forms[e.a][i][j] for j in range(width)]
            row[k] -= e.direction[i]
            rows.append(row)
    for ident in idents:
        if isinstance(ident, VertexVertex):
            if c.positions[ident.a] != c.positions[ident.b]:
                raise InconsistentIdentification(f"nodes {ident.a} and {ident.b} have different images")
            for i in range(n):
                rows.append([forms[ident.a][i][j] - forms[ident.b][i][j] for j in range(width)])
        elif isinstance(ident, VertexEdge):
            e = c.edges[ident.edge]
            rel = geo.sub(c.positions[ident.node], c.positions[e.a])
            t = next(r / d for r, d in zip(rel, e.direction) if d != 0)
            if any(r != t * d for r, d in zip(rel, e.direction)) or not 0 < t < e.length:
                raise InconsistentIdentification(f"node {ident.node} is not inside edge {ident.edge}")
            for nu in _normals(e.direction):
                rows.append([sum(nu[i] * (forms[ident.node][i][j] - forms[e.a][i][j]) for i in range(n))
                             for j in range(width)])
        else:
            raise TypeError(f"unknown identification {ident!r}")
    return Matrix.from_rows(rows, width)


def param_oracle_rank(c: ParamCurve, idents: Sequence[Identification] = ()) -> int:
    m = identification_matrix(c, idents)
    return m.cols - matrix_rank(m)


def end_marked_def_dim(c: ParamCurve, rank: int, m: int) -> int:
    ends = len(c.ends)
    if m < 0 or m > ends:
        raise MarkerError(f"{m} markers on a curve with {ends} ends")
    return rank - m if m < ends else rank - m + 1


# ------------------------------------------------------------ balancing sums

def _rot(v):
    return (-v[1], v[0])


def balancing_sum_raw(c: ParamCurve, points: Sequence[Sequence]) -> Fraction:
    """sum_i <R(w_i d_i), p_i> with R the quarter turn, no validation."""
    total = Fraction(0)
    for r, p in zip(c.ends, points):
        rv = _rot([r.weight * x for x in r.direction])
        total += rv[0] * Fraction(p[0]) + rv[1] * Fraction(p[1])
    return total


def balancing_sum(c: ParamCurve, marking: EndMarking) -> Fraction:
    if c.n != 2:
        raise PreconditionError("the balancing identity is planar")
    by_end: dict[int, tuple] = {}
    for i, p in marking.markers:
        if not 0 <= i < len(c.ends):
            raise MarkerError(f"marker on unknown end {i}")
        if i in by_end:
            raise MarkerError(f"end {i} carries two markers")
        r = c.ends[i]
        rel = geo.sub(p, c.positions[r.node])
        t = next(x / d for x, d in zip(rel, r.direction) if d != 0)
        if t <= 0 or any(x != t * d for x, d in zip(rel, r.direction)):
            raise MarkerError(f"marker {p} is off end {i}")
        by_end[i] = p
    missing = [i for i in range(len(c.ends)) if i not in by_end]
    if missing:
        raise MarkerError(f"ends {missing} are unmarked")
    return balancing_sum_raw(c, [by_end[i] for i in range(len(c.ends))])


# ---------------------------------------------------------- p-vertex bound

def image_points(c: ParamCurve, idents: Sequence[Identification]) -> set[tuple[Fraction, ...]]:
    pts = set()
    for ident in idents:
        node = ident.a if isinstance(ident, VertexVertex) else ident.node
        pts.add(c.positions[node])
    return pts


def p_vertices_bound(c: ParamCurve, idents: Sequence[Identification]) -> tuple[int, int]:
    """(bound, p) where p counts the overvalent image points made by ``idents``."""
    if c.n != 2:
        raise PreconditionError("the p-vertex bound is planar")
    if any(v != 3 for v in c.valences()):
        raise PreconditionError("curve is not trivalent")
    if c.genus != 0:
        raise PreconditionError("curve is not rational")
    p = len(image_points(c, idents))
    return len(c.ends) - 1 + max(0, p - 2), p


# ----------------------------------------------------- bounded components

@dataclass
class Chain:
    """A maximal straight path of dual segments through parallelogram duals."""

    segments: list
    ends: list  # per endpoint: (cell, outgoing direction at that cell, weight) or None for infinity
    length: Fraction = Fraction(0)


@dataclass
class Resolution:
    curve: ParamCurve | None
    node_cells: list[int]
    chains: list[Chain]
    nonnodal: list[int] = field(default_factory=list)


def resolve_nodes(s: Subdivision, f: TropicalPolynomial | None = None) -> Resolution:
    """Parameterize the plane curve of ``s`` by pulling its nodes apart.

    Every parallelogram dual is a transversal crossing of two branches; the
    branches are glued straight through it.  The remaining dual vertices
    become the nodes of the abstract graph.
    """
    if s.n != 2:
        raise PreconditionError("node resolution is planar")
    if f is None:
        f = pick_interior_coefficients(s)
    dc = dual_complex(s, f)
    para = {i for i in range(len(s.cells)) if s.cell_class(i).kind == geo.PolygonClass.PARALLELOGRAM}
    # segments: ("e", k) bounded, ("r", k) ray; each has endpoints per cell
    segs = [("e", k) for k in range(len(dc.edges))] + [("r", k) for k in range(len(dc.rays))]
    parent = {sg: sg for sg in segs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    at_cell: dict[int, list] = {i: [] for i in range(len(s.cells))}
    for k, e in enumerate(dc.edges):
        at_cell[e.cells[0]].append((("e", k), e.direction, e.weight))
        at_cell[e.cells[1]].append((("e", k), tuple(-x for x in e.direction), e.weight))
    for k, r in enumerate(dc.rays):
        at_cell[r.cell].append((("r", k), r.direction, r.weight))
    for p in para:
        inc = at_cell[p]
        for (sa, da, _), (sb, db, _) in [(x, y) for i, x in enumerate(inc) for y in inc[i + 1:]]:
            if tuple(-x for x in da) == db:
                parent[find(sa)] = find(sb)
    groups: dict = {}
    for sg in segs:
        groups.setdefault(find(sg), []).append(sg)
    chains = []
    for key in sorted(groups, key=lambda g: sorted(groups[g])):
        members = sorted(groups[key])
        ends = []
        length = Fraction(0)
        for sg in members:
            if sg[0] == "e":
                e = dc.edges[sg[1]]
                length += e.length
                if e.cells[0] not in para:
                    ends.append((e.cells[0], e.direction, e.weight))
                if e.cells[1] not in para:
                    ends.append((e.cells[1], tuple(-x for x in e.direction), e.weight))
            else:
                r = dc.rays[sg[1]]
                ends.append(None)
                if r.cell not in para:
                    ends.append((r.cell, r.direction, r.weight))
        chains.append(Chain(members, ends, length))
    node_cells = [i for i in range(len(s.cells)) if i not in para]
    nonnodal = [i for i in s.nontrivial_cells()]
    where = {ci: k for k, ci in enumerate(node_cells)}
    edges, rays = [], []
    representable = True
    for ch in chains:
        finite = [x for x in ch.ends if x is not None]
        if len(finite) == 2:
            (ca, da, w), (cb, _, _) = finite
            edges.append(Edge(where[ca], where[cb], da, w, ch.length))
        elif len(finite) == 1 and len(ch.ends) == 2:
            ca, da, w = finite[0]
            rays.append(End(where[ca], da, w))
        else:
            representable = False
    curve = None
    if representable and node_cells:
        curve = ParamCurve(2, tuple(dc.positions[ci] for ci in node_cells), tuple(edges), tuple(rays))
    return Resolution(curve, node_cells, chains, nonnodal)


def bounded_components_rank(s: Subdivision, f: TropicalPolynomial | None = None) -> RankReport:
    """Rank from the bounded pieces of the curve left after deleting its
    non-nodal singular points.

    Each bounded piece obeys the planar balancing identity, which is a
    linear relation among the coordinates of the deleted points it touches;
    those relations form the rows of M.
    """
    res = resolve_nodes(s, f)
    vnn = res.nonnodal
    col = {ci: k for k, ci in enumerate(vnn)}
    removed = set(vnn)
    # union-find over chains and the surviving (triangle) nodes
    parent: dict = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, ch in enumerate(res.chains):
        find(("c", k))
        for end in ch.ends:
            if end is not None and end[0] not in removed:
                parent[find(("c", k))] = find(("n", end[0]))
    comps: dict = {}
    for k in range(len(res.chains)):
        comps.setdefault(find(("c", k)), []).append(k)
    rows = []
    n_bounded = 0
    for root in sorted(comps, key=lambda r: comps[r]):
        members = comps[root]
        if any(None in res.chains[k].ends for k in members):
            continue
        n_bounded += 1
        row = [Fraction(0)] * (2 * len(vnn))
        for k in members:
            for end in res.chains[k].ends:
                if end is not None and end[0] in removed:
                    cell, d_out, w = end
                    toward = (-w * d_out[0], -w * d_out[1])
                    rv = _rot(toward)
                    row[2 * col[cell]] += rv[0]
                    row[2 * col[cell] + 1] += rv[1]
        rows.append(row)
    M = Matrix.from_rows(rows, 2 * len(vnn))
    rk_m = matrix_rank(M)
    exp = expected_rank_embedded(s)
    rep = RankReport.exact(exp + n_bounded - rk_m, COMPONENTS)
    rep.notes.update({"bounded_components": n_bounded, "rank_M": rk_m,
                      "coarse_upper": exp + max(0, n_bounded - 2), "nonnodal": len(vnn)})
    return rep
