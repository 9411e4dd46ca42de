"""Edges of the unimodular triangulation of ``P_G`` induced by an arc order.

The triangulation is a cone from the origin over a triangulation of the
boundary, so it has one edge from the origin to each of the ``2m`` vertices.
Two non-antipodal vertices span an edge iff no directed 3-cycle traverses
both directed arcs and, for every directed 4-cycle that does, the minimal
arc of that cycle under the order is one of the pair's two arcs.

The total does not depend on the order.  Antipodal pairs are never edges:
their segment passes through the origin, which is itself a vertex.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Arc, Graph, arc_index, arc_pairs
from .polytope import (DirectedArcPair, _require_present, candidate_pairs,
                       cycle_steps, directed_cycles_through, local_counts)


@dataclass(frozen=True, eq=False)
class ArcOrder:
    """Total order on all C(n, 2) potential arcs, stored as a rank array.

    ``ranks[k]`` is the rank of the ``k``-th arc in lexicographic order.
    Absent arcs are ranked too, so toggling arcs never invalidates an order.
    """

    n: int
    ranks: tuple

    def __post_init__(self):
        size = self.n * (self.n - 1) // 2
        if sorted(self.ranks) != list(range(size)):
            raise ValueError(f"ranks must be a permutation of 0..{size - 1}")

    @classmethod
    def identity(cls, n: int) -> "ArcOrder":
        return cls(n, tuple(range(n * (n - 1) // 2)))

    @classmethod
    def from_sequence(cls, n: int, arcs) -> "ArcOrder":
        """Order in which ``arcs`` come first (in the given order), then the rest lexicographically."""
        size = n * (n - 1) // 2
        ranks = [None] * size
        nxt = 0
        for a in arcs:
            a = a if isinstance(a, Arc) else Arc(*a)
            k = arc_index(n, a.u - 1, a.v - 1)
            if ranks[k] is not None:
                raise ValueError(f"arc {a} listed twice")
            ranks[k] = nxt
            nxt += 1
        for k in range(size):
            if ranks[k] is None:
                ranks[k] = nxt
                nxt += 1
        return cls(n, tuple(ranks))

    def rank(self, u: int, v: int) -> int:
        """Rank of the arc ``{u, v}`` (1-indexed nodes)."""
        return self.ranks[arc_index(self.n, u - 1, v - 1)]

    def as_matrix(self) -> np.ndarray:
        """Symmetric ``n x n`` rank matrix; the diagonal holds ``-1``."""
        r = np.full((self.n, self.n), -1, dtype=np.int64)
        pairs = arc_pairs(self.n)
        r[pairs[:, 0], pairs[:, 1]] = self.ranks
        r[pairs[:, 1], pairs[:, 0]] = self.ranks
        return r

    def swapped(self, k: int) -> "ArcOrder":
        """Order with the arcs of rank ``k`` and ``k + 1`` exchanged."""
        ranks = list(self.ranks)
        i, j = ranks.index(k), ranks.index(k + 1)
        ranks[i], ranks[j] = k + 1, k
        return ArcOrder(self.n, tuple(ranks))


def random_arc_order(n: int, seed: int) -> ArcOrder:
    """Uniformly random arc order, deterministic in ``seed``."""
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    size = n * (n - 1) // 2
    return ArcOrder(n, tuple(int(r) for r in rng.permutation(size)))


@dataclass(frozen=True)
class TriEdgeReport:
    origin_edges: int
    disjoint_pairs: int
    adjacent_same_direction: int
    adjacent_opposite: int

    @property
    def pair_edges(self) -> int:
        return self.disjoint_pairs + self.adjacent_same_direction + self.adjacent_opposite

    @property
    def total(self) -> int:
        return self.origin_edges + self.pair_edges


def is_tri_edge(g: Graph, order: ArcOrder, pair: DirectedArcPair) -> bool:
    """Local-rule triangulation edge test for a non-antipodal pair."""
    _require_present(g, pair)
    _check_order(g, order)
    x, y = pair.x, pair.y
    rank = order.rank
    shared = x.arc.shared_node(y.arc)
    if shared is None:
        a, b, c, d = x.tail, x.head, y.tail, y.head
        if not (g.adjacent(b, c) and g.adjacent(d, a)):
            return True
        return min(rank(a, b), rank(c, d)) < min(rank(b, c), rank(d, a))
    if x.head == y.head or x.tail == y.tail:
        return True
    if x.head == y.tail:
        u1, v, u2 = x.tail, x.head, y.head
    else:
        u1, v, u2 = y.tail, y.head, x.head
    if g.adjacent(u1, u2):
        return False
    own = min(rank(u1, v), rank(v, u2))
    both = g.rows[u1 - 1] & g.rows[u2 - 1] & ~(1 << (v - 1))
    while both:
        low = both & -both
        w = low.bit_length()
        both ^= low
        if min(rank(u2, w), rank(w, u1)) < own:
            return False
    return True


def is_tri_edge_naive(g: Graph, order: ArcOrder, pair: DirectedArcPair) -> bool:
    """Reference predicate by explicit cycle search."""
    _require_present(g, pair)
    _check_order(g, order)
    own = {pair.x.arc, pair.y.arc}
    for cycle in directed_cycles_through(g, pair.x):
        steps = cycle_steps(cycle)
        if pair.y not in steps:
            continue
        if len(cycle) == 3:
            return False
        smallest = min((s.arc for s in steps), key=lambda a: order.rank(a.u, a.v))
        if smallest not in own:
            return False
    return True


def count_tri_edges(g: Graph, order: ArcOrder) -> TriEdgeReport:
    """Count triangulation edges by enumerating all candidate pairs under ``order``."""
    _check_order(g, order)
    arcs = g.arcs()
    disjoint = same = opposite = 0
    for i, a in enumerate(arcs):
        for b in arcs[i + 1:]:
            adjacent = a.shared_node(b) is not None
            for pair in candidate_pairs(a, b):
                if not is_tri_edge(g, order, pair):
                    continue
                if not adjacent:
                    disjoint += 1
                elif pair.x.head == pair.y.head or pair.x.tail == pair.y.tail:
                    same += 1
                else:
                    opposite += 1
    return TriEdgeReport(2 * g.m, disjoint, same, opposite)


def tri_edge_counts_dense(adjacency) -> TriEdgeReport:
    """Order-free evaluation of :func:`count_tri_edges` from matrix products.

    Of the two matchings forming a 4-cycle exactly one holds the cycle's
    minimal arc, so every 4-cycle blocks two orientations instead of four.
    Of the 2-paths joining two non-adjacent nodes exactly one (the one with
    the smallest arc) keeps its opposite orientations.
    """
    s = local_counts(adjacency)
    return TriEdgeReport(
        origin_edges=2 * s["m"],
        disjoint_pairs=4 * s["disjoint"] - 2 * s["c4"],
        adjacent_same_direction=2 * s["paths2"],
        adjacent_opposite=2 * s["open_cn_pos"],
    )


def _check_order(g: Graph, order: ArcOrder):
    if order.n != g.n:
        raise ValueError(f"arc order is for n={order.n}, graph has n={g.n}")
