import itertools

import pytest
from hypothesis import given, settings, strategies as st

from seplab.graph import Graph
from seplab.moments import expectation_triangulation
from seplab.polytope import candidate_pairs, count_edges, edge_pairs
from seplab.triangulation import (ArcOrder, count_tri_edges, is_tri_edge, is_tri_edge_naive,
                                  random_arc_order, tri_edge_counts_dense)

from conftest import graphs

orders = st.integers(0, 2**63 - 1)


def test_k4_count_and_complete_graph_expectation():
    # the cuboctahedron: 24 edges, one diagonal per square face, 12 spokes
    rep = count_tri_edges(Graph.complete(4), ArcOrder.identity(4))
    assert rep.total == 42 == 24 + 6 + 12
    assert expectation_triangulation(4, 1) == 42


@pytest.mark.parametrize("arcs, n, expected", [
    ([(1, 2), (2, 3), (1, 3)], 3, 12),
    ([(1, 2), (2, 3), (3, 4)], 4, 18),
    ([(1, 2)], 2, 2),
])
def test_small_counts(arcs, n, expected):
    g = Graph.from_arcs(n, arcs)
    assert count_tri_edges(g, ArcOrder.identity(n)).total == expected
    assert tri_edge_counts_dense(g.adjacency).total == expected


def test_contains_polytope_edges_on_triangle_free_graph_plus_spokes():
    g = Graph.from_arcs(4, [(1, 2), (2, 3), (3, 4)])
    assert count_tri_edges(g, ArcOrder.identity(4)).pair_edges >= count_edges(g).total


def test_order_validation():
    with pytest.raises(ValueError):
        ArcOrder(3, (0, 0, 1))
    with pytest.raises(ValueError):
        count_tri_edges(Graph.empty(4), ArcOrder.identity(3))


def test_from_sequence_and_swap():
    o = ArcOrder.from_sequence(4, [(3, 4), (1, 2)])
    assert o.rank(3, 4) == 0 and o.rank(1, 2) == 1
    s = o.swapped(0)
    assert s.rank(1, 2) == 0 and s.rank(3, 4) == 1
    m = o.as_matrix()
    assert (m == m.T).all() and m[2, 3] == 0


@given(graphs(), orders)
def test_fast_equals_naive(g, seed):
    order = random_arc_order(g.n, seed)
    for a, b in itertools.combinations(g.arcs(), 2):
        for pair in candidate_pairs(a, b):
            assert is_tri_edge(g, order, pair) == is_tri_edge_naive(g, order, pair)


@given(graphs(max_nodes=9), orders, orders)
def test_order_invariance(g, s1, s2):
    a = count_tri_edges(g, random_arc_order(g.n, s1))
    b = count_tri_edges(g, random_arc_order(g.n, s2))
    assert a.total == b.total == tri_edge_counts_dense(g.adjacency).total


@settings(max_examples=25)
@given(graphs(min_nodes=3, max_nodes=8), orders, st.data())
def test_adjacent_transposition_invariance(g, seed, data):
    order = random_arc_order(g.n, seed)
    k = data.draw(st.integers(0, g.n * (g.n - 1) // 2 - 2))
    assert count_tri_edges(g, order).total == count_tri_edges(g, order.swapped(k)).total


@given(graphs(), orders)
def test_spokes_and_reversal(g, seed):
    rep = count_tri_edges(g, random_arc_order(g.n, seed))
    assert rep.origin_edges == 2 * g.m
    assert rep.pair_edges % 2 == 0


@given(graphs(), orders, st.data())
def test_relabel_invariance(g, seed, data):
    perm = data.draw(st.permutations(list(range(1, g.n + 1))))
    assert count_tri_edges(g.relabel(perm), random_arc_order(g.n, seed)).total == \
        count_tri_edges(g, random_arc_order(g.n, seed + 1)).total


@given(graphs())
def test_triangulation_refines_polytope(g):
    # every polytope edge survives in the triangulation
    order = ArcOrder.identity(g.n)
    for pair in edge_pairs(g):
        assert is_tri_edge(g, order, pair)
