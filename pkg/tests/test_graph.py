import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seplab.graph import (Arc, EdgeListError, Graph, SimParams, arc_index, arc_pairs,
                          erdos_renyi, from_edge_list, sample_adjacency)

from conftest import graphs


def test_arc_is_canonical():
    assert Arc(3, 1) == Arc(1, 3)
    assert Arc(3, 1).u == 1
    with pytest.raises(ValueError):
        Arc(2, 2)


def test_shared_node():
    assert Arc(1, 2).shared_node(Arc(2, 5)) == 2
    assert Arc(1, 2).shared_node(Arc(3, 4)) is None


def test_arc_index_matches_lexicographic_pairs():
    pairs = arc_pairs(6)
    for k, (u, v) in enumerate(pairs):
        assert arc_index(6, int(u), int(v)) == k
    assert len(pairs) == 15


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
def test_sim_params_rejects_boundary_probabilities(p):
    with pytest.raises(ValueError):
        SimParams(5, p)


def test_empty_and_complete():
    assert Graph.empty(4).m == 0
    assert Graph.complete(5).m == 10
    assert all(Graph.complete(5).degree(u) == 4 for u in range(1, 6))


def test_out_of_range_node():
    g = Graph.empty(3)
    with pytest.raises(IndexError):
        g.has_arc((1, 4))


@given(graphs())
def test_handshake(g):
    assert sum(g.degree(u) for u in range(1, g.n + 1)) == 2 * g.m


@given(graphs())
def test_adjacency_round_trip(g):
    a = g.adjacency
    assert (a == a.T).all() and not a.diagonal().any()
    assert Graph.from_adjacency(a) == g
    assert int(a.sum()) == 2 * g.m


@given(graphs(), st.data())
def test_toggle_sets_arc(g, data):
    u, v = data.draw(st.lists(st.integers(1, g.n), min_size=2, max_size=2, unique=True))
    plus, minus = g.toggle_arc((u, v), True), g.toggle_arc((u, v), False)
    assert plus.has_arc((u, v)) and not minus.has_arc((u, v))
    assert plus.m - minus.m == 1
    assert plus.toggle_arc((u, v), False) == minus


@given(graphs(min_nodes=3))
def test_path_counts_against_brute_force(g):
    for s, t in itertools.combinations(range(1, g.n + 1), 2):
        others = [w for w in range(1, g.n + 1) if w not in (s, t)]
        two = sum(g.adjacent(s, w) and g.adjacent(w, t) for w in others)
        three = sum(g.adjacent(s, a) and g.adjacent(a, b) and g.adjacent(b, t)
                    for a, b in itertools.permutations(others, 2))
        assert g.path_count(s, t, 2) == two == g.common_neighbor_count(s, t)
        assert g.path_count(s, t, 3) == three


@given(graphs(), st.data())
def test_relabel_preserves_degree_sequence(g, data):
    perm = data.draw(st.permutations(list(range(1, g.n + 1))))
    h = g.relabel(perm)
    assert h.m == g.m
    assert sorted(h.degree(u) for u in range(1, g.n + 1)) == \
        sorted(g.degree(u) for u in range(1, g.n + 1))


def test_sampling_is_deterministic_and_stream_separated():
    params = SimParams(20, 0.3, seed=7)
    a = sample_adjacency(params, 4)
    assert (a == sample_adjacency(params, 4)).all()
    assert not (a == sample_adjacency(params, 5)).all()
    assert not (a == sample_adjacency(params, 4, stream=2)).all()


@settings(max_examples=20)
@given(st.integers(0, 2**32), st.integers(0, 1000))
def test_replicate_depends_only_on_seed_and_index(seed, i):
    params = SimParams(8, 0.5, seed)
    assert erdos_renyi(params, i) == erdos_renyi(params, i)


def test_arc_frequency_is_p():
    params = SimParams(30, 0.2, seed=1)
    m = np.mean([erdos_renyi(params, i).m for i in range(400)])
    # mean 87, sd of the average about 0.33
    assert abs(m - 0.2 * 435) < 2.0


def test_edge_list_parsing():
    g = from_edge_list("# demo\nn=4\n1 2\n\n2 3\n3 4\n")
    assert g == Graph.from_arcs(4, [(1, 2), (2, 3), (3, 4)])
    assert from_edge_list(g.to_edge_list()) == g
    assert from_edge_list(b"n=2\n1 2\n").m == 1


def test_edge_list_duplicate_warns():
    with pytest.warns(UserWarning):
        g = from_edge_list("n=3\n1 2\n2 1\n")
    assert g.m == 1


@pytest.mark.parametrize("text", ["1 2\n", "n=3\n1 1\n", "n=3\n1 4\n", "n=x\n", "n=3\n1\n"])
def test_edge_list_errors(text):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(EdgeListError):
            from_edge_list(text)
