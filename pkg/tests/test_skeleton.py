from fractions import Fraction

import pytest

from helpers import simplex4, stellar, tetrahedron, two_tetrahedra
from troprank.errors import InvalidSkeleton
from troprank.rank import oracle_rank
from troprank.skeleton import (Cycle, SkeletonCurve, lower_bound_r3, lower_bound_r4, skeleton_metrics,
                               skeleton_of_surface)
from troprank.subdivision import pick_interior_coefficients

O3 = (0, 0, 0)
STAR3 = ((-1, 0, 0), (0, -1, 0), (0, 0, -1), (1, 1, 1))


def test_single_node():
    sk = SkeletonCurve((O3,), (), tuple((0, d) for d in STAR3))
    m = skeleton_metrics(sk)
    assert (m.ends, m.overvalence, m.genus, m.closed_volumes) == (4, 0, 0, 0)
    assert lower_bound_r3(m) == 3 == oracle_rank(tetrahedron())


def test_two_nodes():
    sk = SkeletonCurve((O3, (1, 1, 1)), ((0, 1),),
                       ((0, (-1, 0, 0)), (0, (0, -1, 0)), (0, (0, 0, -1)),
                        (1, (1, 0, 0)), (1, (0, 1, 0)), (1, (0, 0, 1))))
    m = skeleton_metrics(sk)
    assert (m.ends, m.overvalence, m.genus, m.closed_volumes) == (6, 0, 0, 0)
    assert lower_bound_r3(m) == 4 == oracle_rank(two_tetrahedra())


def test_from_surfaces():
    sk = skeleton_of_surface(tetrahedron())
    assert len(sk.nodes) == 1 and len(sk.rays) == 4 and not sk.edges
    sk = skeleton_of_surface(two_tetrahedra())
    assert len(sk.nodes) == 2 and len(sk.edges) == 1 and len(sk.rays) == 6


def test_closed_volume():
    s = stellar()
    m = skeleton_metrics(skeleton_of_surface(s, pick_interior_coefficients(s)))
    assert m.closed_volumes == 1
    assert m.notes["bounded_chambers"] == 1
    # one more than the value without the closed volume
    assert lower_bound_r3(m) == Fraction(m.ends, 2) + 1 - Fraction(m.overvalence, 2) + 1
    assert lower_bound_r3(m) <= oracle_rank(s)


def test_r4():
    m = skeleton_metrics(skeleton_of_surface(simplex4()))
    assert (m.ends, m.genus, m.overvalence) == (5, 0, 0)
    assert lower_bound_r4(m) == 4 == oracle_rank(simplex4())
    from troprank.skeleton import SkeletonMetrics
    assert lower_bound_r4(SkeletonMetrics(6, 0, 0, 0)) == Fraction(13, 3)
    assert lower_bound_r4(SkeletonMetrics(5, 0, 1, 0)) == Fraction(11, 3)


def test_invalid():
    with pytest.raises(InvalidSkeleton):
        skeleton_metrics(SkeletonCurve((O3,), (), tuple((0, d) for d in STAR3[:3])))
    # a triangle of edges with no declared cycle
    nodes = (O3, (1, 0, 0), (0, 1, 0))
    rays = tuple((v, d) for v in range(3) for d in ((0, 0, 1), (0, 0, -1)))
    sk = SkeletonCurve(nodes, ((0, 1), (1, 2), (2, 0)), rays)
    with pytest.raises(InvalidSkeleton):
        skeleton_metrics(sk)
    ok = SkeletonCurve(nodes, ((0, 1), (1, 2), (2, 0)), rays, (Cycle((0, 1, 2), (0, 0, 1), 0),))
    assert skeleton_metrics(ok).closed_volumes == 0
