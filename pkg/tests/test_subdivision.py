import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import WITNESS_VERTS, square_chain, stellar, triangle, two_tetrahedra, unit_square, witness
from troprank import geometry as geo
from troprank.errors import NonInterior, NonRegular
from troprank.generate import grid, random_lift
from troprank.subdivision import (Subdivision, TropicalPolynomial, certify_interior, dual_complex, is_interior,
                                  is_regular, pick_interior_coefficients, regular_subdivision,
                                  regular_subdivision_with_lift, tropical_eval, validate)

TWISTED = [(3, 4, 5), (0, 1, 4), (0, 4, 3), (1, 2, 5), (1, 5, 4), (2, 0, 3), (2, 3, 5)]


def tp(*cs):
    return TropicalPolynomial(tuple(Fraction(c) for c in cs))


def test_validate_ok():
    assert validate(triangle()).ok
    assert validate(witness()).ok
    assert validate(two_tetrahedra()).ok


def test_validate_overlap():
    s = Subdivision.build([(0, 0), (2, 0), (0, 2), (2, 2)], [(0, 1, 2), (0, 1, 3)])
    rep = validate(s)
    assert not rep.ok
    assert {v.kind for v in rep.violations} & {"covering", "non-face-intersection"}


def test_validate_half_edge():
    # two unit squares, the right one shifted up by one lattice step on a doubled grid
    verts = [(0, 0), (2, 0), (2, 2), (0, 2), (4, 1), (4, 3), (2, 3)]
    s = Subdivision.build(verts, [(0, 1, 2, 3), (1, 4, 5, 6)])
    rep = validate(s)
    assert not rep.ok


def test_validate_other_violations():
    assert not validate(Subdivision.build([(0, 0), (1, 0), (2, 0)], [(0, 1, 2)])).ok
    assert not validate(Subdivision.build([(0, 0), (1, 0), (0, 1), (5, 5)], [(0, 1, 2)])).ok
    assert not validate(Subdivision.build([(0, 0), (2, 0), (0, 2), (1, 0)], [(0, 1, 2, 3)])).ok


def test_tropical_eval_examples():
    s, f = triangle(), tp(0, 0, 0)
    assert tropical_eval(f, s, (0, 0)) == (0, {0, 1, 2})
    assert tropical_eval(f, s, (-1, -1)) == (0, {0})
    assert tropical_eval(f, s, (2, 1)) == (2, {1})


def test_pick_interior_examples():
    assert list(pick_interior_coefficients(triangle()).coefficients) == [0, 0, 0]
    s = Subdivision.build([(0, 0), (1, 0), (0, 1), (1, 1)], [(0, 1, 2), (1, 2, 3)])
    f = pick_interior_coefficients(s)
    assert is_interior(s, f)
    # the diagonal endpoints are lifted above the other two corners
    assert f[1] + f[2] > f[0] + f[3]
    assert is_interior(s, tp(0, 1, 1, 0))


def test_twisted_triangulation_not_regular():
    s = Subdivision.build(WITNESS_VERTS, TWISTED)
    assert validate(s).ok
    assert not is_regular(s)
    with pytest.raises(NonRegular):
        pick_interior_coefficients(s)


def test_witness_regular():
    assert is_regular(witness())


def test_dual_complex_triangle():
    dc = dual_complex(triangle(), tp(0, 0, 0))
    assert dc.positions == [(0, 0)]
    assert not dc.edges
    assert sorted(r.direction for r in dc.rays) == [(-1, 0), (0, -1), (1, 1)]


def test_dual_complex_glued_tetrahedra():
    s = two_tetrahedra()
    dc = dual_complex(s, pick_interior_coefficients(s))
    assert len(dc.positions) == 2
    assert len(dc.edges) == 1
    assert len(dc.rays) == 6


def test_square_not_affine():
    with pytest.raises(NonInterior):
        certify_interior(unit_square(), tp(0, 0, 0, 1))


def test_lift_roundtrip_examples():
    for s in (witness(), square_chain(3), stellar()):
        f = pick_interior_coefficients(s)
        t = regular_subdivision(s.vertices, f.coefficients)
        assert sorted(sorted(t.vertices[i] for i in c.vertex_indices) for c in t.cells) == \
            sorted(sorted(s.vertices[i] for i in c.vertex_indices) for c in s.cells)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(2, 3))
def test_random_lifts_are_valid(seed, n):
    rng = random.Random(seed)
    s, f = random_lift(rng, n, 2 if n == 2 else 1)
    assert validate(s).ok
    assert is_interior(s, f)
    dc = dual_complex(s, f)
    assert len(dc.positions) == len(s.cells)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=9, max_size=9))
def test_lift_then_pick_gives_same_subdivision(heights):
    s, f = regular_subdivision_with_lift(grid(2, 2), heights)
    g = pick_interior_coefficients(s)
    t = regular_subdivision(s.vertices, g.coefficients)
    assert sorted(c.vertex_indices for c in t.cells) == sorted(c.vertex_indices for c in s.cells)


def test_cells_are_convex_in_3d():
    s = stellar()
    for i in range(len(s.cells)):
        assert geo.is_simplex(s.cell_points(i), 3)
