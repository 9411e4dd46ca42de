"""Geometric ground truth for small graphs, in exact rational arithmetic.

Two vertices ``v_i, v_j`` of a polytope span an edge iff some linear
functional ``c`` satisfies ``c.v_i = c.v_j`` and ``c.v_i >= c.v_k + 1`` for
every other vertex ``v_k``.  By Farkas' lemma this system is infeasible
exactly when

    sum_k lam_k (v_i - v_k) + mu (v_i - v_j) = 0,   sum_k lam_k = 1,   lam >= 0

has a solution (``mu`` free).  The alternative system has only ``dim + 1``
rows, so each test is a tiny phase-one simplex over ``Fraction``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph
from .polytope import DirectedArc, DirectedArcPair, edge_pairs
from .triangulation import ArcOrder, count_tri_edges

MAX_ORACLE_NODES = 7
MAX_EXHAUSTIVE_NODES = 5

POLYTOPE_ORACLE = "polytope_oracle"
POLYTOPE_COMBINATORIAL = "polytope_combinatorial"
TRIANGULATION_COMBINATORIAL = "triangulation_combinatorial"


class SizeGuardError(ValueError):
    """Instance too large for exact enumeration without an explicit override."""


def feasible(a_eq, b_eq) -> bool:
    """Decide whether ``{x >= 0 : A x = b}`` is non-empty, exactly.

    Phase one of the simplex method on the auxiliary problem with one
    artificial variable per row; Bland's rule prevents cycling.
    """
    rows = [[Fraction(v) for v in r] for r in a_eq]
    rhs = [Fraction(v) for v in b_eq]
    m = len(rows)
    if m == 0:
        return True
    nvar = len(rows[0])
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    # tableau columns: structural 0..nvar-1, artificial nvar..nvar+m-1, then rhs
    width = nvar + m
    tab = []
    for i in range(m):
        row = rows[i] + [Fraction(0)] * m + [rhs[i]]
        row[nvar + i] = Fraction(1)
        tab.append(row)
    basis = [nvar + i for i in range(m)]
    # reduced costs of  min sum(artificials)
    cost = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(nvar):
            cost[j] -= tab[i][j]
        cost[width] -= tab[i][width]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen in phase one (objective bounded below by 0)
            raise RuntimeError("unbounded phase-one problem")
        _pivot(tab, cost, leave, enter)
        basis[leave] = enter
    return cost[width] == 0


def _pivot(tab, cost, r, c):
    prow = tab[r]
    piv = prow[c]
    if piv != 1:
        prow[:] = [v / piv for v in prow]
    for row in itertools.chain(tab, (cost,)):
        if row is prow:
            continue
        f = row[c]
        if f:
            row[:] = [a - f * b for a, b in zip(row, prow)]


def vertex_labels(g: Graph) -> list:
    """Directed arcs labelling the vertices; arc ``{u,v}`` (``u<v``) yields ``u->v`` then ``v->u``."""
    out = []
    for a in g.arcs():
        out.append(DirectedArc(a.u, a.v))
        out.append(DirectedArc(a.v, a.u))
    return out


def embed_vertices(g: Graph) -> list:
    """Vertices ``e_i - e_j`` of ``P_G`` as exact rational tuples, ordered like :func:`vertex_labels`."""
    if g.m == 0:
        raise ValueError("the empty graph has no symmetric edge polytope")
    verts = []
    for d in vertex_labels(g):
        v = [Fraction(0)] * g.n
        v[d.tail - 1] = Fraction(1)
        v[d.head - 1] = Fraction(-1)
        verts.append(tuple(v))
    return verts


def is_geometric_edge(vertices, i: int, j: int) -> bool:
    """True iff ``conv(vertices[i], vertices[j])`` is an edge of ``conv(vertices)``."""
    if i == j:
        raise ValueError("an edge needs two different vertices")
    if len(set(vertices)) != len(vertices):
        raise ValueError("duplicate vertex in input")
    others = [k for k in range(len(vertices)) if k not in (i, j)]
    if not others:
        # the segment is the whole polytope, which is not a face of itself
        return False
    vi, vj = vertices[i], vertices[j]
    dim = len(vi)
    cols = [[vi[r] - vertices[k][r] for r in range(dim)] for k in others]
    d = [vi[r] - vj[r] for r in range(dim)]
    cols.append(d)
    cols.append([-x for x in d])
    a_eq = [[col[r] for col in cols] for r in range(dim)]
    a_eq.append([1] * len(others) + [0, 0])
    b_eq = [0] * dim + [1]
    return not feasible(a_eq, b_eq)


def is_vertex(vertices, i: int) -> bool:
    """True iff ``vertices[i]`` is a vertex of ``conv(vertices)`` (strict maximiser exists)."""
    others = [k for k in range(len(vertices)) if k != i]
    if not others:
        return True
    vi = vertices[i]
    dim = len(vi)
    a_eq = [[vi[r] - vertices[k][r] for k in others] for r in range(dim)]
    a_eq.append([1] * len(others))
    return not feasible(a_eq, [0] * dim + [1])


@dataclass(frozen=True)
class OracleResult:
    vertex_set: list
    labels: list
    edge_pairs: frozenset
    combinatorial_match: bool
    mismatches: tuple = ()

    @property
    def edge_count(self) -> int:
        return len(self.edge_pairs)


def enumerate_edges(g: Graph, override: bool = False) -> OracleResult:
    """Test every vertex pair of ``P_G`` geometrically and compare with the combinatorial rule."""
    if g.n > MAX_ORACLE_NODES and not override:
        raise SizeGuardError(f"n={g.n} exceeds the oracle guard of {MAX_ORACLE_NODES} nodes")
    labels = vertex_labels(g) if g.m else []
    verts = embed_vertices(g) if g.m else []
    geo = set()
    for i, j in itertools.combinations(range(len(verts)), 2):
        if is_geometric_edge(verts, i, j):
            geo.add((i, j))
    index = {d: k for k, d in enumerate(labels)}
    comb = set()
    for pair in edge_pairs(g):
        i, j = sorted((index[pair.x], index[pair.y]))
        comb.add((i, j))
    diff = tuple(sorted(geo ^ comb))
    return OracleResult(verts, labels, frozenset(geo), not diff,
                        tuple(DirectedArcPair(labels[i], labels[j]) for i, j in diff))


def all_graphs(n: int):
    """Every labelled simple graph on ``n`` nodes (``2^C(n,2)`` of them)."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield Graph.from_arcs(n, [pairs[k] for k in range(len(pairs)) if mask >> k & 1])


def exhaustive_expectation(n: int, p, model: str = POLYTOPE_COMBINATORIAL,
                           override: bool = False) -> Fraction:
    """Exact ``E[K]`` by summing ``p^|S| q^(C(n,2)-|S|) K(S)`` over all arc sets ``S``."""
    if n > MAX_EXHAUSTIVE_NODES and not override:
        raise SizeGuardError(f"n={n} exceeds the exhaustive guard of {MAX_EXHAUSTIVE_NODES} nodes")
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    q = 1 - p
    total_arcs = n * (n - 1) // 2
    if model == POLYTOPE_ORACLE:
        def k_of(g):
            return enumerate_edges(g, override=override).edge_count if g.m else 0
    elif model == POLYTOPE_COMBINATORIAL:
        def k_of(g):
            return len(edge_pairs(g))
    elif model == TRIANGULATION_COMBINATORIAL:
        order = ArcOrder.identity(n)

        def k_of(g):
            return count_tri_edges(g, order).total
    else:
        raise ValueError(f"unknown model {model!r}")
    acc = Fraction(0)
    for g in all_graphs(n):
        weight = p**g.m * q**(total_arcs - g.m)
        if weight:
            acc += weight * k_of(g)
    return acc
