from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from troprank import geometry as geo
from troprank.errors import DegenerateCell, GenericityError, InvalidCell

P = geo.PolygonClass


def test_affine_dim():
    assert geo.affine_dim([]) == -1
    assert geo.affine_dim([(0, 0)]) == 0
    assert geo.affine_dim([(0, 0), (1, 0), (2, 0)]) == 1
    assert geo.affine_dim([(0, 0), (1, 0), (0, 1), (1, 1)]) == 2


def test_classify_examples():
    assert geo.classify_polygon_2d([(0, 0), (1, 0), (0, 1)]).kind == P.TRIANGLE
    assert geo.classify_polygon_2d([(0, 0), (1, 0), (1, 1), (0, 1)]).kind == P.PARALLELOGRAM
    c = geo.classify_polygon_2d([(0, 0), (2, 0), (3, 1), (0, 1)])
    assert (c.kind, c.m) == (P.EVEN_NONPARALLEL, 2)


def test_classify_larger_polygons():
    hexagon = [(1, 0), (2, 0), (2, 1), (1, 2), (0, 2), (0, 1)]
    assert geo.classify_polygon_2d(hexagon) == P(P.PARALLEL_EVEN, 3)
    pentagon = [(0, 0), (2, 0), (2, 1), (1, 2), (0, 1)]
    assert geo.classify_polygon_2d(pentagon) == P(P.ODD, 2)
    skew_hex = [(0, 0), (3, 0), (4, 1), (3, 2), (1, 2), (0, 1)]
    assert geo.classify_polygon_2d(skew_hex).kind == P.EVEN_NONPARALLEL


def test_classify_rejects_bad_order():
    with pytest.raises(InvalidCell):
        geo.classify_polygon_2d([(0, 0), (1, 1), (1, 0), (0, 1)])
    with pytest.raises(InvalidCell):
        geo.convex_cyclic_order([(0, 0), (1, 0), (2, 0)])


def test_is_simplex():
    assert geo.is_simplex([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)
    assert not geo.is_simplex([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)], 3)
    assert geo.is_simplex([(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)], 4)
    with pytest.raises(DegenerateCell):
        geo.is_simplex([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)], 3)


def test_volumes():
    assert geo.normalized_volume([(0, 0), (1, 0), (0, 1)]) == 1
    assert geo.normalized_volume([(0, 0), (2, 0), (0, 2)]) == 4
    assert geo.normalized_volume([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]) == 1
    # a segment of lattice length 3
    assert geo.lattice_volume([(0, 0), (3, 0)]) == 3


def test_coorient_two_squares():
    left = [(0, 0), (1, 0), (1, 1), (0, 1)]
    right = [(1, 0), (2, 0), (2, 1), (1, 1)]
    a = (Fraction(1), Fraction(1, 1000))
    assert geo.coorient_order([left, right], a) == [0, 1]
    assert geo.coorient_order([right, left], a) == [1, 0]
    assert geo.coorient_order([left], a) == [0]


def test_coorient_non_generic():
    left = [(0, 0), (1, 0), (1, 1), (0, 1)]
    right = [(1, 0), (2, 0), (2, 1), (1, 1)]
    with pytest.raises(GenericityError):
        geo.coorient_order([left, right], (0, 1))


def test_generic_vector_is_generic():
    cells = [[(0, 0), (3, 0), (0, 3)], [(3, 0), (3, 3), (0, 3)]]
    a = geo.generic_vector(cells)
    assert geo.is_generic(a, cells)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=9, unique=True))
def test_hull_order_is_convex(points):
    if geo.affine_dim(points) < 2:
        return
    hv = geo.hull_vertices(points)
    poly = [points[i] for i in hv]
    order = geo.convex_cyclic_order(poly)
    cyc = [poly[i] for i in order]
    k = len(cyc)
    assert all(geo.cross(cyc[i], cyc[(i + 1) % k], cyc[(i + 2) % k]) > 0 for i in range(k))
    # every input point lies weakly inside
    for p in points:
        assert all(geo.cross(cyc[i], cyc[(i + 1) % k], p) >= 0 for i in range(k))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)),
                min_size=4, max_size=8, unique=True))
def test_triangulation_volume(points):
    if geo.affine_dim(points) < 3:
        return
    simplices = geo.triangulate(points)
    total = sum(geo.normalized_volume([points[i] for i in t]) for t in simplices)
    assert total == geo.normalized_volume(points)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=4))
def test_primitive(v):
    if not any(v):
        return
    p = geo.primitive(v)
    from math import gcd
    from functools import reduce
    assert reduce(gcd, p) == 1
    k = reduce(gcd, v)
    assert tuple(x // k for x in v) == p
