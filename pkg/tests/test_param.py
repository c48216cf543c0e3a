import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import square_chain, witness
from troprank.errors import InconsistentIdentification, MarkerError
from troprank.generate import random_marking, random_tree_curve
from troprank.param import (Edge, End, EndMarking, ParamCurve, VertexEdge, VertexVertex, balancing_sum,
                            balancing_sum_raw, bounded_components_rank, end_marked_def_dim,
                            expected_rank_of_curve, p_vertices_bound, param_oracle_rank, resolve_nodes)
from troprank.rank import expected_rank_embedded, oracle_rank

LINE = ParamCurve(2, ((F(0), F(0)),), (), (End(0, (-1, 0)), End(0, (0, -1)), End(0, (1, 1))))
TREE = ParamCurve(2, ((F(0), F(0)), (F(2), F(2))), (Edge(0, 1, (1, 1), 1, F(2)),),
                  (End(0, (-1, 0)), End(0, (0, -1)), End(1, (0, 1)), End(1, (1, 0))))


def test_line():
    assert expected_rank_of_curve(LINE) == 2
    assert param_oracle_rank(LINE) == 2
    assert end_marked_def_dim(LINE, 2, 1) == 1
    assert end_marked_def_dim(LINE, 2, 3) == 0
    assert end_marked_def_dim(LINE, 2, 0) == 2
    with pytest.raises(MarkerError):
        end_marked_def_dim(LINE, 2, 4)


def test_tree_oracle():
    assert expected_rank_of_curve(TREE) == 3 == param_oracle_rank(TREE)


def test_cycle_closing_identification():
    # a trivalent tree whose image walks around a unit square back to its start
    nodes = tuple((F(x), F(y)) for x, y in ((0, 0), (1, 0), (1, 1), (0, 1), (0, 0)))
    edges = (Edge(0, 1, (1, 0), 1, F(1)), Edge(1, 2, (0, 1), 1, F(1)),
             Edge(2, 3, (-1, 0), 1, F(1)), Edge(3, 4, (0, -1), 1, F(1)))
    ends = (End(0, (-1, 1)), End(0, (0, -1)), End(1, (1, -1)), End(2, (1, 1)), End(3, (-1, 1)),
            End(4, (1, -1)), End(4, (-1, 0)))
    c = ParamCurve(2, nodes, edges, ends)
    assert not c.problems()
    assert param_oracle_rank(c) == expected_rank_of_curve(c) == 6
    # closing the cycle forces l1 = l3 and l2 = l4
    assert param_oracle_rank(c, [VertexVertex(0, 4)]) == 4
    bound, p = p_vertices_bound(c, [VertexVertex(0, 4)])
    assert (bound, p) == (6, 1)


def test_inconsistent_identifications():
    with pytest.raises(InconsistentIdentification):
        param_oracle_rank(TREE, [VertexVertex(0, 1)])
    with pytest.raises(InconsistentIdentification):
        param_oracle_rank(TREE, [VertexEdge(0, 0)])


def test_balancing_examples():
    m = EndMarking(((0, (-1, 0)), (1, (0, -2)), (2, (3, 3))))
    assert balancing_sum(LINE, m) == 0
    assert balancing_sum_raw(LINE, [(-1, 1), (0, -2), (3, 3)]) != 0
    with pytest.raises(MarkerError):
        balancing_sum(LINE, EndMarking(((0, (-1, 1)), (1, (0, -2)), (2, (3, 3)))))
    with pytest.raises(MarkerError):
        balancing_sum(LINE, EndMarking(((0, (-1, 0)), (1, (0, -2)))))


def test_p_bound():
    assert p_vertices_bound(TREE, []) == (3, 0)
    assert p_vertices_bound(TREE, [VertexVertex(0, 0)])[0] == 3


def test_p_bound_formula_values():
    # bound = #End - 1 + max(0, p - 2)
    ends = len(TREE.ends)
    for p, want in ((0, ends - 1), (2, ends - 1), (4, ends + 1)):
        assert ends - 1 + max(0, p - 2) == want


def test_bounded_components():
    s = square_chain(3)
    rep = bounded_components_rank(s)
    assert rep.value == expected_rank_embedded(s)
    rep = bounded_components_rank(witness())
    assert rep.value == oracle_rank(witness()) == 3
    res = resolve_nodes(witness())
    assert res.nonnodal


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 5))
def test_random_tree_balancing(seed, splits):
    rng = random.Random(seed)
    c = random_tree_curve(rng, splits)
    assert not c.problems()
    assert balancing_sum(c, random_marking(rng, c)) == 0
    assert param_oracle_rank(c) == expected_rank_of_curve(c)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([F(1, 2), F(3), F(5, 7)]))
def test_scaling_preserves_rank(seed, k):
    c = random_tree_curve(random.Random(seed), 3)
    assert param_oracle_rank(c.scaled(k)) == param_oracle_rank(c)
