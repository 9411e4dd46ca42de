import itertools

from hypothesis import strategies as st

from seplab.graph import Graph


@st.composite
def graphs(draw, min_nodes=2, max_nodes=7):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_arcs(n, [a for a, k in zip(pairs, keep) if k])


@st.composite
def graphs_with_arc(draw, min_nodes=2, max_nodes=7):
    g = draw(graphs(max(min_nodes, 2), max_nodes))
    u, v = draw(st.lists(st.integers(1, g.n), min_size=2, max_size=2, unique=True))
    return g, (u, v)


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(list(range(1, n + 1))))
