"""Edges of the symmetric edge polytope ``P_G = conv{±(e_i - e_j) : ij in E}``.

Vertices of ``P_G`` are the directed arcs of ``G``.  Two non-antipodal
vertices span an edge iff no directed 3- or 4-cycle of ``G`` traverses both
directed arcs.  Three evaluators are provided:

* :func:`is_edge_naive` walks every directed 3- and 4-cycle through the
  first arc and looks for the second one;
* :func:`is_edge_fast` applies the local rules (O(1) per pair);
* :func:`edge_counts_dense` aggregates the same rules over a whole graph
  with matrix products, for Monte Carlo use.

For two disjoint arcs the completing arcs of the unique candidate 4-cycle
are, per orientation::

    (a->b, c->d)  ->  {b,c}, {d,a}
    (a->b, d->c)  ->  {b,d}, {c,a}
    (b->a, c->d)  ->  {a,c}, {d,b}
    (b->a, d->c)  ->  {a,d}, {c,b}
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Arc, Graph


@dataclass(frozen=True, order=True)
class DirectedArc:
    tail: int
    head: int

    def __post_init__(self):
        if self.tail == self.head:
            raise ValueError("a directed arc needs two distinct nodes")

    @property
    def arc(self) -> Arc:
        return Arc(self.tail, self.head)

    def reversed(self) -> "DirectedArc":
        return DirectedArc(self.head, self.tail)

    def __str__(self):
        return f"{self.tail}->{self.head}"


@dataclass(frozen=True)
class DirectedArcPair:
    """Unordered pair of directed arcs that is a candidate polytope edge.

    Antipodal pairs (``x`` and its reversal) are rejected here, not in the
    edge predicates.
    """

    x: DirectedArc
    y: DirectedArc

    def __post_init__(self):
        if self.x == self.y:
            raise ValueError("a pair needs two different directed arcs")
        if self.x.arc == self.y.arc:
            raise ValueError(f"antipodal pair {self.x}, {self.y} is never an edge candidate")
        if self.y < self.x:
            a, b = self.y, self.x
            object.__setattr__(self, "x", a)
            object.__setattr__(self, "y", b)

    @classmethod
    def of(cls, x, y) -> "DirectedArcPair":
        """Build from ``(tail, head)`` tuples or :class:`DirectedArc` objects."""
        return cls(_directed(x), _directed(y))

    def reversed(self) -> "DirectedArcPair":
        return DirectedArcPair(self.x.reversed(), self.y.reversed())

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class EdgeCountReport:
    """Polytope edge count ``K`` split by how the two underlying arcs meet."""

    disjoint_pairs: int
    adjacent_same_direction: int
    adjacent_opposite: int

    @property
    def total(self) -> int:
        return self.disjoint_pairs + self.adjacent_same_direction + self.adjacent_opposite


def directed_cycles_through(g: Graph, x: DirectedArc):
    """Yield every directed 3- and 4-cycle of ``g`` that traverses ``x``.

    Cycles are node tuples starting ``(x.tail, x.head, ...)``; consecutive
    nodes (cyclically) are adjacent in ``g``.
    """
    a, b = x.tail, x.head
    others = [w for w in range(1, g.n + 1) if w not in (a, b)]
    for w in others:
        if g.adjacent(b, w) and g.adjacent(w, a):
            yield (a, b, w)
    for w1 in others:
        if not g.adjacent(b, w1):
            continue
        for w2 in others:
            if w2 != w1 and g.adjacent(w1, w2) and g.adjacent(w2, a):
                yield (a, b, w1, w2)


def cycle_steps(cycle) -> set:
    k = len(cycle)
    return {DirectedArc(cycle[i], cycle[(i + 1) % k]) for i in range(k)}


def is_edge_naive(g: Graph, pair: DirectedArcPair) -> bool:
    """Reference predicate: search all directed 3-/4-cycles through ``pair.x``."""
    _require_present(g, pair)
    for cycle in directed_cycles_through(g, pair.x):
        if pair.y in cycle_steps(cycle):
            return False
    return True


def is_edge_fast(g: Graph, pair: DirectedArcPair) -> bool:
    """Local-rule predicate, equivalent to :func:`is_edge_naive`."""
    _require_present(g, pair)
    x, y = pair.x, pair.y
    shared = x.arc.shared_node(y.arc)
    if shared is None:
        a, b, c, d = x.tail, x.head, y.tail, y.head
        return not (g.adjacent(b, c) and g.adjacent(d, a))
    if x.head == y.head or x.tail == y.tail:
        return True
    if x.head == y.tail:
        u1, v, u2 = x.tail, x.head, y.head
    else:
        u1, v, u2 = y.tail, y.head, x.head
    return not g.adjacent(u1, u2) and g.common_neighbor_count(u1, u2, excluded=v) == 0


def candidate_pairs(a: Arc, b: Arc):
    """The four non-antipodal orientation pairs of two distinct arcs."""
    for x in (DirectedArc(a.u, a.v), DirectedArc(a.v, a.u)):
        for y in (DirectedArc(b.u, b.v), DirectedArc(b.v, b.u)):
            yield DirectedArcPair(x, y)


def edge_pairs(g: Graph, predicate=is_edge_fast) -> set:
    """All candidate pairs of ``g`` accepted by ``predicate``."""
    arcs = g.arcs()
    out = set()
    for i, a in enumerate(arcs):
        for b in arcs[i + 1:]:
            for pair in candidate_pairs(a, b):
                if predicate(g, pair):
                    out.add(pair)
    return out


def count_edges(g: Graph) -> EdgeCountReport:
    """Count the edges of ``P_G`` by enumerating unordered arc pairs.

    O(m^2) pairs, each settled with O(1) bit operations.
    """
    arcs = g.arcs()
    rows = g.rows
    disjoint = same = opposite = 0
    for i, e in enumerate(arcs):
        for f in arcs[i + 1:]:
            shared = e.shared_node(f)
            if shared is None:
                a, b, c, d = e.u - 1, e.v - 1, f.u - 1, f.v - 1
                # each perfect matching completing {e, f} to a 4-cycle blocks two orientations
                blocked = 2 * (_adj(rows, b, c) and _adj(rows, a, d)) \
                    + 2 * (_adj(rows, a, c) and _adj(rows, b, d))
                disjoint += 4 - blocked
            else:
                same += 2
                u1 = (e.u if e.v == shared else e.v) - 1
                u2 = (f.u if f.v == shared else f.v) - 1
                if not _adj(rows, u1, u2):
                    cn = rows[u1] & rows[u2] & ~(1 << (shared - 1))
                    if cn == 0:
                        opposite += 2
    return EdgeCountReport(disjoint, same, opposite)


def local_counts(adjacency) -> dict:
    """Graph statistics from which both edge counts follow.

    Keys: ``m`` arcs, ``disjoint`` unordered pairs of disjoint arcs,
    ``paths2`` unordered pairs of arcs sharing a node, ``c4`` 4-cycle
    subgraphs, ``open_cn1`` / ``open_cn_pos`` non-adjacent node pairs with
    exactly one / at least one common neighbour.
    """
    a = np.asarray(adjacency, dtype=np.float64)
    # float64 products are exact for the integer sizes used here (n << 2**17)
    c = a @ a
    deg = np.diag(c).astype(np.int64)
    m = int(deg.sum()) // 2
    paths2 = int((deg * (deg - 1)).sum()) // 2
    iu, iv = np.triu_indices(a.shape[0], k=1)
    cn = np.rint(c[iu, iv]).astype(np.int64)
    adj = a[iu, iv] > 0
    c4 = int((cn * (cn - 1)).sum()) // 4
    return {
        "m": m,
        "disjoint": m * (m - 1) // 2 - paths2,
        "paths2": paths2,
        "c4": c4,
        "open_cn1": int(np.count_nonzero(~adj & (cn == 1))),
        "open_cn_pos": int(np.count_nonzero(~adj & (cn >= 1))),
    }


def edge_counts_dense(adjacency) -> EdgeCountReport:
    """Same result as :func:`count_edges`, from matrix products.

    Every 4-cycle is the union of two perfect matchings of its nodes, and
    each matching blocks two orientations of the other one; a 2-path
    ``u1 - v - u2`` keeps its two opposite orientations iff ``u1, u2`` are
    non-adjacent and ``v`` is their only common neighbour.
    """
    s = local_counts(adjacency)
    return EdgeCountReport(
        disjoint_pairs=4 * s["disjoint"] - 4 * s["c4"],
        adjacent_same_direction=2 * s["paths2"],
        adjacent_opposite=2 * s["open_cn1"],
    )


def _adj(rows, i: int, j: int) -> bool:
    return bool((rows[i] >> j) & 1)


def _directed(x) -> DirectedArc:
    if isinstance(x, DirectedArc):
        return x
    tail, head = x
    return DirectedArc(tail, head)


def _require_present(g: Graph, pair: DirectedArcPair):
    for d in (pair.x, pair.y):
        if not g.has_arc(d.arc):
            raise ValueError(f"arc {d.arc} is not present in the graph")
