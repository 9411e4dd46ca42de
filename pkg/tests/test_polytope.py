import itertools

import pytest
from hypothesis import given, settings, strategies as st

from seplab.graph import Graph
from seplab.polytope import (DirectedArc, DirectedArcPair, candidate_pairs, count_edges,
                             directed_cycles_through, edge_counts_dense, edge_pairs,
                             is_edge_fast, is_edge_naive, local_counts)

from conftest import graphs

TRIANGLE = Graph.from_arcs(3, [(1, 2), (2, 3), (1, 3)])
K4 = Graph.complete(4)
P4 = Graph.from_arcs(4, [(1, 2), (2, 3), (3, 4)])
C4 = Graph.from_arcs(4, [(1, 2), (2, 3), (3, 4), (1, 4)])


@pytest.mark.parametrize("g, expected", [
    (TRIANGLE, 6), (K4, 24), (P4, 12), (Graph.from_arcs(2, [(1, 2)]), 0), (Graph.empty(5), 0),
])
def test_small_counts(g, expected):
    assert count_edges(g).total == expected
    assert len(edge_pairs(g, is_edge_naive)) == expected
    assert edge_counts_dense(g.adjacency).total == expected


def test_four_cycle_by_hand():
    # 4 arcs: 4 adjacent pairs keep 2 same-direction orientations each (8);
    # the 2 opposite pairs (2-paths with a second common neighbour) are lost;
    # each of the 2 disjoint pairs loses the 2 orientations on the cycle: 2 * (4 - 2) = 4
    rep = count_edges(C4)
    assert (rep.adjacent_same_direction, rep.adjacent_opposite, rep.disjoint_pairs) == (8, 0, 4)


def test_triangle_hexagon_neighbours():
    assert is_edge_fast(TRIANGLE, DirectedArcPair.of((1, 2), (1, 3)))
    assert not is_edge_fast(TRIANGLE, DirectedArcPair.of((1, 2), (2, 3)))


def test_antipodal_pair_rejected():
    with pytest.raises(ValueError):
        DirectedArcPair.of((1, 2), (2, 1))
    with pytest.raises(ValueError):
        DirectedArcPair.of((1, 2), (1, 2))


def test_absent_arc_rejected():
    with pytest.raises(ValueError):
        is_edge_fast(P4, DirectedArcPair.of((1, 2), (1, 3)))


def test_pair_is_unordered():
    a = DirectedArcPair.of((3, 4), (1, 2))
    assert a == DirectedArcPair.of((1, 2), (3, 4))
    assert a.reversed() == DirectedArcPair.of((2, 1), (4, 3))


def test_candidate_pairs():
    pairs = list(candidate_pairs(K4.arcs()[0], K4.arcs()[5]))
    assert len(set(pairs)) == 4


def test_cycles_are_valid():
    for cyc in directed_cycles_through(K4, DirectedArc(1, 2)):
        assert cyc[:2] == (1, 2) and len(set(cyc)) == len(cyc)
        assert all(K4.adjacent(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc)))
    # one 3-cycle per third node, two 4-cycles per ordering of the other two
    assert len(list(directed_cycles_through(K4, DirectedArc(1, 2)))) == 2 + 2


@given(graphs())
def test_fast_equals_naive(g):
    for a, b in itertools.combinations(g.arcs(), 2):
        for pair in candidate_pairs(a, b):
            assert is_edge_fast(g, pair) == is_edge_naive(g, pair)


@given(graphs())
def test_dense_equals_enumeration(g):
    assert edge_counts_dense(g.adjacency) == count_edges(g)
    assert count_edges(g).total == len(edge_pairs(g))


@given(graphs())
def test_reversal_symmetry(g):
    edges = edge_pairs(g)
    assert {e.reversed() for e in edges} == edges


@given(graphs(), st.data())
def test_relabel_invariance(g, data):
    perm = data.draw(st.permutations(list(range(1, g.n + 1))))
    assert count_edges(g.relabel(perm)) == count_edges(g)


@given(graphs())
def test_same_direction_pairs_always_edges(g):
    rep = count_edges(g)
    assert rep.adjacent_same_direction == sum(d * (d - 1) for d in
                                              (g.degree(u) for u in range(1, g.n + 1)))


@settings(max_examples=30)
@given(graphs(min_nodes=4, max_nodes=9))
def test_local_counts_brute_force(g):
    s = local_counts(g.adjacency)
    arcs = g.arcs()
    c4 = 0
    for quad in itertools.combinations(range(1, g.n + 1), 4):
        a, b, c, d = quad
        for cyc in ((a, b, c, d), (a, b, d, c), (a, c, b, d)):
            c4 += all(g.adjacent(cyc[i], cyc[(i + 1) % 4]) for i in range(4))
    assert s["c4"] == c4
    assert s["m"] == len(arcs)
    assert s["disjoint"] == sum(x.shared_node(y) is None for x, y in itertools.combinations(arcs, 2))
