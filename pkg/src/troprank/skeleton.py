"""1-skeleta of tropical surfaces and the closed-volume lower bounds.

A skeleton is a geometric graph with rays.  In R^3 its minimal cycles are
planar polygons; filling each with a disk gives a 2-complex whose second
homology counts the closed volumes, i.e. the bounded chambers it encloses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence

from . import geometry as geo
from .errors import InvalidSkeleton, PreconditionError
from .linalg import Matrix, matrix_rank
from .subdivision import Subdivision, TropicalPolynomial, cell_facets, dual_complex, pick_interior_coefficients


@dataclass(frozen=True)
class Cycle:
    nodes: tuple[int, ...]
    normal: tuple[Fraction, ...]
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(int(x) for x in self.nodes))
        object.__setattr__(self, "normal", tuple(Fraction(x) for x in self.normal))
        object.__setattr__(self, "offset", Fraction(self.offset))


@dataclass(frozen=True)
class SkeletonCurve:
    nodes: tuple[tuple[Fraction, ...], ...]
    edges: tuple[tuple[int, int], ...] = ()
    rays: tuple[tuple[int, tuple[int, ...]], ...] = ()
    cycles: tuple[Cycle, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(tuple(Fraction(x) for x in p) for p in self.nodes))
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "rays", tuple((int(v), tuple(int(x) for x in d)) for v, d in self.rays))
        if self.cycles is not None:
            object.__setattr__(self, "cycles", tuple(self.cycles))

    @property
    def dim(self) -> int:
        return len(self.nodes[0]) if self.nodes else 0

    def valences(self) -> list[int]:
        val = [0] * len(self.nodes)
        for a, b in self.edges:
            val[a] += 1
            val[b] += 1
        for v, _ in self.rays:
            val[v] += 1
        return val


@dataclass
class SkeletonMetrics:
    ends: int
    overvalence: int
    genus: int
    closed_volumes: int
    hypothesis: str = "n/a"  # heuristic verdict on the inductive-closure hypothesis
    notes: dict = field(default_factory=dict)


def _components(n_nodes: int, edges) -> int:
    parent = list(range(n_nodes))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        parent[find(a)] = find(b)
    return len({find(i) for i in range(n_nodes)})


# ------------------------------------------------------------ cycle geometry

def _in_plane_coords(normal) -> tuple[int, int]:
    k = max(range(3), key=lambda i: abs(normal[i]))
    return tuple(i for i in range(3) if i != k)


def _polygon_2d(c: SkeletonCurve, cyc: Cycle):
    J = _in_plane_coords(cyc.normal)
    return [tuple(c.nodes[v][j] for j in J) for v in cyc.nodes], J


def _strictly_inside(poly, x) -> bool:
    k = len(poly)
    signs = [geo.cross(poly[i], poly[(i + 1) % k], x) for i in range(k)]
    return all(s > 0 for s in signs) or all(s < 0 for s in signs)


def _segment_crosses(c: SkeletonCurve, cyc: Cycle, p, d, t_max) -> bool:
    """Does p + t d, 0 <= t <= t_max (None: unbounded), meet the open disk of ``cyc``?"""
    poly, J = _polygon_2d(c, cyc)
    nrm, off = cyc.normal, cyc.offset
    dn = geo.dot(nrm, d)
    pn = geo.dot(nrm, p) - off
    if dn != 0:
        t = -pn / dn
        if t < 0 or (t_max is not None and t > t_max):
            return False
        x = tuple(p[j] + t * d[j] for j in J)
        return _strictly_inside(poly, x)
    if pn != 0:
        return False
    # segment lies in the plane: clip against every edge line of the polygon
    p2 = tuple(p[j] for j in J)
    d2 = tuple(d[j] for j in J)
    k = len(poly)
    orient = 1 if geo.cross(poly[0], poly[1], poly[2]) > 0 else -1
    lo, hi = Fraction(0), t_max
    for i in range(k):
        a, b = poly[i], poly[(i + 1) % k]
        # orient * cross(a, b, p2 + t d2) > 0 inside
        base = orient * geo.cross(a, b, p2)
        slope = orient * ((b[0] - a[0]) * d2[1] - (b[1] - a[1]) * d2[0])
        if slope == 0:
            if base <= 0:
                return False
        elif slope > 0:
            lo = max(lo, -base / slope)
        else:
            bound = -base / slope
            hi = bound if hi is None else min(hi, bound)
    if hi is None:
        return True
    if lo >= hi:
        return False
    mid = (lo + hi) / 2
    return _strictly_inside(poly, tuple(p2[i] + mid * d2[i] for i in range(2)))


def cycle_problems(c: SkeletonCurve) -> list[str]:
    out = []
    edge_set = {frozenset(e) for e in c.edges}
    for ci, cyc in enumerate(c.cycles or ()):
        if len(cyc.nodes) < 3 or not any(cyc.normal):
            out.append(f"cycle {ci} is degenerate")
            continue
        for k, v in enumerate(cyc.nodes):
            w = cyc.nodes[(k + 1) % len(cyc.nodes)]
            if frozenset((v, w)) not in edge_set:
                out.append(f"cycle {ci} uses a missing edge {v}-{w}")
            if geo.dot(cyc.normal, c.nodes[v]) != cyc.offset:
                out.append(f"cycle {ci} node {v} is off the declared plane")
        if out:
            continue
        poly, _ = _polygon_2d(c, cyc)
        try:
            order = geo.convex_cyclic_order(poly)
        except Exception:
            out.append(f"cycle {ci} is not a convex polygon")
            continue
        k = len(poly)
        pos = order.index(0)
        rot = order[pos:] + order[:pos]
        if rot != list(range(k)) and [rot[0]] + rot[1:][::-1] != list(range(k)):
            out.append(f"cycle {ci} nodes are not in cyclic order")
            continue
        members = set(cyc.nodes)
        for a, b in c.edges:
            if a in members and b in members:
                continue
            pa = c.nodes[a]
            if _segment_crosses(c, cyc, pa, geo.sub(c.nodes[b], pa), Fraction(1)):
                out.append(f"edge {a}-{b} crosses cycle {ci}")
        for v, d in c.rays:
            if _segment_crosses(c, cyc, c.nodes[v], d, None):
                out.append(f"ray at node {v} crosses cycle {ci}")
    return out


def boundary_matrix(c: SkeletonCurve) -> Matrix:
    """Boundary map from the filled cycles to the oriented edges."""
    index = {}
    for k, (a, b) in enumerate(c.edges):
        index[(a, b)] = (k, 1)
        index[(b, a)] = (k, -1)
    cols = []
    for cyc in c.cycles or ():
        col = [0] * len(c.edges)
        for k, v in enumerate(cyc.nodes):
            w = cyc.nodes[(k + 1) % len(cyc.nodes)]
            e, sgn = index[(v, w)]
            col[e] += sgn
        cols.append(col)
    return Matrix.from_rows(cols, len(c.edges)).transpose() if cols else Matrix.zeros(len(c.edges), 0)


# ------------------------------------------------------------------ regions

def _area_vector(pts):
    ax = ay = az = Fraction(0)
    k = len(pts)
    for i in range(k):
        p, q = pts[i], pts[(i + 1) % k]
        ax += p[1] * q[2] - p[2] * q[1]
        ay += p[2] * q[0] - p[0] * q[2]
        az += p[0] * q[1] - p[1] * q[0]
    return (ax / 2, ay / 2, az / 2)


def _cross3(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def regions(c: SkeletonCurve) -> tuple[list[list[tuple[int, int]]], list[Fraction]]:
    """Chambers cut out by the filled cycles, as lists of face sides.

    A side (face, +1) faces along the face normal, (face, -1) against it.
    Faces around each edge are sorted by angle, and facing sides of
    consecutive faces are merged.  The signed volume of a chamber is
    positive exactly for the bounded ones.
    """
    cycles = list(c.cycles or ())
    sides = [(f, s) for f in range(len(cycles)) for s in (1, -1)]
    parent = {x: x for x in sides}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    around: dict[tuple[int, int], list[int]] = {}
    for f, cyc in enumerate(cycles):
        k = len(cyc.nodes)
        for i in range(k):
            a, b = cyc.nodes[i], cyc.nodes[(i + 1) % k]
            around.setdefault((min(a, b), max(a, b)), []).append(f)
    for (a, b), faces in around.items():
        pa = c.nodes[a]
        u = geo.sub(c.nodes[b], pa)
        uu = geo.dot(u, u)

        def inward(f):
            # component, orthogonal to u, of the face's direction away from the edge
            cyc = cycles[f]
            for v in cyc.nodes:
                w = geo.sub(c.nodes[v], pa)
                perp = tuple(x - geo.dot(w, u) / uu * y for x, y in zip(w, u))
                if any(perp):
                    return perp
            raise InvalidSkeleton(f"cycle {f} is degenerate")

        dirs = {f: inward(f) for f in faces}
        e1 = dirs[faces[0]]
        e2 = _cross3(u, e1)

        def angle_key(f):
            w = dirs[f]
            x, y = geo.dot(w, e1), geo.dot(w, e2)
            return (0 if (y > 0 or (y == 0 and x > 0)) else 1, x, y)

        def cmp(f, g):
            ka, kb = angle_key(f), angle_key(g)
            if ka[0] != kb[0]:
                return ka[0] - kb[0]
            cr = ka[1] * kb[2] - ka[2] * kb[1]
            return -1 if cr > 0 else (1 if cr < 0 else 0)

        ring = sorted(faces, key=cmp_to_key(cmp))
        for i, f in enumerate(ring):
            g = ring[(i + 1) % len(ring)]
            # side of f facing the rotation towards g, side of g facing back
            sf = 1 if geo.dot(cycles[f].normal, _cross3(u, dirs[f])) > 0 else -1
            sg = -1 if geo.dot(cycles[g].normal, _cross3(u, dirs[g])) > 0 else 1
            parent[find((f, sf))] = find((g, sg))
    groups: dict = {}
    for x in sides:
        groups.setdefault(find(x), []).append(x)
    chambers = sorted(groups.values())
    volumes = []
    for ch in chambers:
        vol = Fraction(0)
        for f, s in ch:
            cyc = cycles[f]
            pts = [c.nodes[v] for v in cyc.nodes]
            A = _area_vector(pts)
            # orient the area vector along the declared normal
            if geo.dot(A, cyc.normal) < 0:
                A = tuple(-x for x in A)
            vol -= s * geo.dot(pts[0], A) / 3
        volumes.append(vol)
    return chambers, volumes


def hypothesis_check(c: SkeletonCurve) -> str:
    """Heuristic: each bounded chamber has a face whose other side is unbounded."""
    if not c.cycles:
        return "ok (heuristic)"
    chambers, vols = regions(c)
    side_of = {}
    for k, ch in enumerate(chambers):
        for x in ch:
            side_of[x] = k
    unbounded = {k for k, v in enumerate(vols) if v <= 0}
    for k, ch in enumerate(chambers):
        if k in unbounded:
            continue
        if not any(side_of[(f, -s)] in unbounded for f, s in ch):
            return "fails (heuristic)"
    return "ok (heuristic)"


# ------------------------------------------------------------------ metrics

def skeleton_metrics(c: SkeletonCurve) -> SkeletonMetrics:
    if not c.nodes:
        raise InvalidSkeleton("empty skeleton")
    n = c.dim
    base = n + 1
    for a, b in c.edges:
        if not (0 <= a < len(c.nodes) and 0 <= b < len(c.nodes)) or a == b:
            raise InvalidSkeleton(f"bad edge {a}-{b}")
    val = c.valences()
    low = [v for v, k in enumerate(val) if k < base]
    if low:
        raise InvalidSkeleton(f"nodes {low} have valence below {base}")
    ov = sum(k - base for k in val)
    genus = len(c.edges) - len(c.nodes) + _components(len(c.nodes), c.edges)
    n_cl = 0
    verdict = "n/a"
    notes: dict = {}
    if n == 3:
        probs = cycle_problems(c)
        if probs:
            raise InvalidSkeleton("; ".join(probs))
        d2 = boundary_matrix(c)
        r2 = matrix_rank(d2) if c.cycles else 0
        if genus - r2 > 0:
            raise InvalidSkeleton(f"{genus - r2} independent cycles are not declared as planar minimal cycles")
        n_cl = len(c.cycles or ()) - r2
        verdict = hypothesis_check(c)
        if c.cycles:
            chambers, vols = regions(c)
            notes["bounded_chambers"] = sum(1 for v in vols if v > 0)
    return SkeletonMetrics(len(c.rays), ov, genus, n_cl, verdict, notes)


def lower_bound_r3(m: SkeletonMetrics) -> Fraction:
    return Fraction(m.ends, 2) + 1 - Fraction(m.overvalence, 2) + m.closed_volumes


def lower_bound_r4(m: SkeletonMetrics) -> Fraction:
    return Fraction(m.ends, 3) - Fraction(m.genus, 3) + Fraction(7, 3) - Fraction(m.overvalence, 3)


# ------------------------------------------------------ from a subdivision

def _edges_of_cells(s: Subdivision) -> dict[frozenset, list[int]]:
    out: dict[frozenset, list[int]] = {}
    for ci in range(len(s.cells)):
        idx = s.cells[ci].vertex_indices
        for face in geo.faces(s.cell_points(ci)):
            if len(face) == 2:
                key = frozenset(idx[k] for k in face)
                out.setdefault(key, []).append(ci)
    return out


def skeleton_of_surface(s: Subdivision, f: TropicalPolynomial | None = None) -> SkeletonCurve:
    """Nodes, edges and rays of the surface of ``f``, with the planar cycles
    dual to interior edges of ``s``."""
    if s.n not in (3, 4):
        raise PreconditionError("skeleta are extracted for surfaces in R^3 (and hypersurfaces in R^4)")
    if f is None:
        f = pick_interior_coefficients(s)
    dc = dual_complex(s, f)
    edges = tuple(e.cells for e in dc.edges)
    rays = tuple((r.cell, r.direction) for r in dc.rays)
    if s.n == 4:
        return SkeletonCurve(tuple(dc.positions), edges, rays, None)
    facets = cell_facets(s)
    cycles = []
    for key, cells in sorted(_edges_of_cells(s).items(), key=lambda kv: sorted(kv[0])):
        touching = [[fc for fc in facets[ci] if key <= fc.vertices] for ci in cells]
        if any(fc.neighbour is None for row in touching for fc in row):
            continue  # boundary edge of the polytope
        start = cells[0]
        ring = [start]
        prev_facet = None
        cur = start
        while True:
            options = [fc for fc in facets[cur] if key <= fc.vertices and fc.vertices != prev_facet]
            fc = options[0]
            prev_facet = fc.vertices
            cur = fc.neighbour
            if cur == start:
                break
            ring.append(cur)
        a, b = sorted(key)
        normal = tuple(Fraction(x) for x in geo.sub(s.vertices[b], s.vertices[a]))
        offset = geo.dot(normal, dc.positions[ring[0]])
        cycles.append(Cycle(tuple(ring), normal, offset))
    return SkeletonCurve(tuple(dc.positions), edges, rays, tuple(cycles))
