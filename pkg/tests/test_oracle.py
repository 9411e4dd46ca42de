from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from seplab.graph import Graph
from seplab.oracle import (POLYTOPE_ORACLE, SizeGuardError, all_graphs, embed_vertices,
                           enumerate_edges, exhaustive_expectation, feasible, is_geometric_edge,
                           is_vertex, vertex_labels)

from conftest import graphs

F = Fraction
TRIANGLE = Graph.from_arcs(3, [(1, 2), (2, 3), (1, 3)])


def test_feasible_small_systems():
    assert feasible([[1, 1]], [1])
    assert not feasible([[1, 1]], [-1])
    assert feasible([[1, -1], [1, 1]], [0, 2])
    assert not feasible([[1, 0], [1, 0]], [1, 2])
    assert feasible([], [])


@settings(max_examples=60)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=3),
       st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_feasible_on_constructed_solution(rows, x):
    # b = A x with x >= 0 is feasible by construction
    b = [sum(a * v for a, v in zip(r, x)) for r in rows]
    assert feasible(rows, b)


def test_embedding():
    verts = embed_vertices(Graph.from_arcs(2, [(1, 2)]))
    assert verts == [(F(1), F(-1)), (F(-1), F(1))]
    verts = embed_vertices(TRIANGLE)
    assert len(set(verts)) == 6
    assert all(sum(v) == 0 for v in verts)
    with pytest.raises(ValueError):
        embed_vertices(Graph.empty(3))


def test_hexagon_edges():
    verts = embed_vertices(TRIANGLE)
    labels = [str(d) for d in vertex_labels(TRIANGLE)]
    i, j, k = labels.index("1->2"), labels.index("1->3"), labels.index("2->1")
    assert is_geometric_edge(verts, i, j)
    assert not is_geometric_edge(verts, i, k)


def test_segment_has_no_edges():
    verts = embed_vertices(Graph.from_arcs(2, [(1, 2)]))
    assert not is_geometric_edge(verts, 0, 1)
    assert enumerate_edges(Graph.from_arcs(4, [(2, 3)])).edge_count == 0


def test_geometric_edge_input_errors():
    verts = embed_vertices(TRIANGLE)
    with pytest.raises(ValueError):
        is_geometric_edge(verts, 1, 1)
    with pytest.raises(ValueError):
        is_geometric_edge(verts + [verts[0]], 0, 1)


def test_square_and_interior_point():
    square = [(F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1))]
    assert is_geometric_edge(square, 0, 1)
    assert not is_geometric_edge(square, 0, 2)
    assert not is_vertex(square + [(F(1, 2), F(1, 2))], 4)
    assert all(is_vertex(square, i) for i in range(4))


@pytest.mark.parametrize("g, expected", [
    (TRIANGLE, 6), (Graph.complete(4), 24), (Graph.from_arcs(4, [(1, 2), (2, 3), (3, 4)]), 12),
])
def test_known_polytopes(g, expected):
    res = enumerate_edges(g)
    assert res.edge_count == expected and res.combinatorial_match


def test_every_generator_is_a_vertex():
    for g in (Graph.complete(4), Graph.from_arcs(5, [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)])):
        verts = embed_vertices(g)
        assert all(is_vertex(verts, i) for i in range(len(verts)))


def test_all_four_node_graphs_match():
    graphs4 = list(all_graphs(4))
    assert len(graphs4) == 64
    assert all(enumerate_edges(g).combinatorial_match for g in graphs4)


@settings(max_examples=30, deadline=None)
@given(graphs(min_nodes=5, max_nodes=5))
def test_five_node_graphs_match(g):
    res = enumerate_edges(g)
    assert res.combinatorial_match and not res.mismatches


def test_no_antipodal_edges():
    res = enumerate_edges(Graph.complete(4))
    for i, j in res.edge_pairs:
        assert res.labels[i].reversed() != res.labels[j]


def test_size_guards():
    with pytest.raises(SizeGuardError):
        enumerate_edges(Graph.empty(8))
    with pytest.raises(SizeGuardError):
        exhaustive_expectation(6, F(1, 2))


def test_exhaustive_expectation_values():
    assert exhaustive_expectation(4, F(1, 2), POLYTOPE_ORACLE) == F(21, 2)
    assert exhaustive_expectation(3, 1, POLYTOPE_ORACLE) == 6
    assert exhaustive_expectation(2, F(1, 2), "triangulation_combinatorial") == 1
