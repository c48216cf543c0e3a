"""Small hand-built instances shared by the test modules."""

from fractions import Fraction
from itertools import combinations

from troprank.subdivision import Subdivision

WITNESS_VERTS = [(0, 0), (4, 0), (0, 4), (1, 1), (2, 1), (1, 2)]
WITNESS_CELLS = [(0, 1, 4, 3), (1, 2, 5, 4), (2, 0, 3, 5), (3, 4, 5)]


def witness():
    return Subdivision.build(WITNESS_VERTS, WITNESS_CELLS)


def triangle():
    return Subdivision.build([(0, 0), (1, 0), (0, 1)], [(0, 1, 2)])


def unit_square():
    return Subdivision.build([(0, 0), (1, 0), (0, 1), (1, 1)], [(0, 1, 3, 2)])


def square_chain(k=3):
    verts = [(x, y) for x in range(k + 1) for y in range(2)]
    cells = [(2 * i, 2 * i + 2, 2 * i + 3, 2 * i + 1) for i in range(k)]
    return Subdivision.build(verts, cells)


def tetrahedron():
    return Subdivision.build([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], [(0, 1, 2, 3)])


def two_tetrahedra():
    return Subdivision.build([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)],
                             [(0, 1, 2, 3), (1, 2, 3, 4)])


def stellar():
    return Subdivision.build([(0, 0, 0), (4, 0, 0), (0, 4, 0), (0, 0, 4), (1, 1, 1)],
                             [(0, 1, 2, 4), (0, 1, 3, 4), (0, 2, 3, 4), (1, 2, 3, 4)])


def simplex4():
    return Subdivision.build([(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
                             [(0, 1, 2, 3, 4)])


def det(rows):
    """Cofactor expansion; slow but independent of the library."""
    if not rows:
        return Fraction(1)
    if len(rows) == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j, a in enumerate(rows[0]):
        if a:
            minor = [r[:j] + r[j + 1:] for r in rows[1:]]
            total += (-1) ** j * Fraction(a) * det(minor)
    return total


def brute_rank(rows):
    """Largest non-vanishing minor."""
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    m, n = len(rows), len(rows[0])
    for k in range(min(m, n), 0, -1):
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                if det([[rows[i][j] for j in cs] for i in rs]) != 0:
                    return k
    return 0


def second_oracle(s):
    """Rank from the system phi_cell(w) = c_w with one affine function per cell.

    The projection to c is injective because cells are full dimensional, so
    the nullity minus one is the rank; no anchors or barycentric coordinates.
    """
    from troprank.linalg import Matrix, nullity
    V, n = len(s.vertices), s.n
    width = V + (n + 1) * len(s.cells)
    rows = []
    for ci, cell in enumerate(s.cells):
        base = V + (n + 1) * ci
        for w in cell.vertex_indices:
            row = [0] * width
            row[w] = -1
            row[base] = 1
            for k in range(n):
                row[base + 1 + k] = s.vertices[w][k]
            rows.append(row)
    return nullity(Matrix.from_rows(rows, width)) - 1


# acceptance results, printed by the terminal summary hook in conftest
RESULTS: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    RESULTS[criterion] = (ok, detail)
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
