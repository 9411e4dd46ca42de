"""Discrete gradients of the edge counts and Monte Carlo estimates of B1..B5.

Each potential arc of G(n, p) is one Rademacher coordinate, so the index
sets of the five sums are arcs, arc pairs and arc triples.  Terms where the
outer index of a second gradient repeats an inner one vanish, leaving

* arcs ``k`` (``B3``),
* ordered pairs ``(k, l)``, ``k != l`` (``B4``, ``B5``),
* ordered triples ``(j, k, l)`` with ``l != j`` and ``l != k`` (``B1``, ``B2``).

Relabelling nodes preserves the law of G(n, p), so every tuple whose arcs
meet in the same pattern has the same expectations.  Tuples are grouped
into orbits of the symmetric group acting on the (at most six) nodes they
touch.  An orbit on ``v`` labelled nodes with ``c`` members has ``c C(n, v)``
members on ``n`` nodes; one representative on nodes ``1..v`` is evaluated
per sampled graph.  The pair orbits sum to ``N (N - 1)`` and the triple
orbits to ``N (N - 1)^2`` tuples, ``N = C(n, 2)``.

For ``F = (K - E K) / sigma`` the centring drops out of every gradient, so
``D F = D K / sigma`` and each ``B`` scales as ``sigma^-4``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .ensemble import MODELS, model_total, summarize
from .graph import STREAM_GRAPH, STREAM_PILOT, Arc, Graph, SimParams, sample_adjacency
from .polytope import count_edges
from .triangulation import ArcOrder, count_tri_edges

KOLMOGOROV_CONSTANTS = (math.sqrt(15) / 2, math.sqrt(3) / 2, 2.0, 2 * math.sqrt(6), 2 * math.sqrt(3))


class DegenerateVarianceError(ValueError):
    """The pilot variance is not positive although some gradient is non-zero."""


@dataclass(frozen=True)
class GradientSample:
    e: Arc
    f: Optional[Arc]
    value: float
    unscaled_delta: int
    bound_rhs: float

    @property
    def within_bound(self) -> bool:
        return abs(self.value) <= self.bound_rhs

    @property
    def ratio(self) -> float:
        if self.bound_rhs == 0:
            return 0.0 if self.value == 0 else math.inf
        return abs(self.value) / self.bound_rhs


def _arc(e) -> Arc:
    return e if isinstance(e, Arc) else Arc(*e)


def _check_model(model: str, order: Optional[ArcOrder], g: Graph):
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    if model == "triangulation":
        if order is None:
            raise ValueError("the triangulation model needs an arc order")
        if order.n != g.n:
            raise ValueError(f"arc order is for n={order.n}, graph has n={g.n}")


def edge_total(g: Graph, model: str, order: Optional[ArcOrder] = None,
               method: str = "dense") -> int:
    """``K`` of ``g``; ``method="enumerate"`` uses the pair-by-pair counters (and ``order``)."""
    if method == "dense":
        return model_total(g.adjacency, model)
    if method != "enumerate":
        raise ValueError(f"unknown method {method!r}")
    if model == "polytope":
        return count_edges(g).total
    return count_tri_edges(g, order).total


def first_gradient_bound(g: Graph, e, model: str, p: float) -> float:
    """Almost-sure bound on ``|D_e K|`` for the graph with ``e`` present.

    ``sqrt(pq) (4 E + 2 W2 + 6 W3)`` with ``E`` the arc count and ``W2``,
    ``W3`` the numbers of ``s``-``t`` paths of length 2 and 3, ``e = st``.
    The triangulation adds the two origin spokes of ``e``.
    """
    e = _arc(e)
    plus = g.toggle_arc(e, True)
    w2 = plus.path_count(e.u, e.v, 2)
    w3 = plus.path_count(e.u, e.v, 3)
    core = 4 * plus.m + 2 * w2 + 6 * w3 + (2 if model == "triangulation" else 0)
    return math.sqrt(p * (1 - p)) * core


def second_gradient_bound(g: Graph, e, f, p: float) -> float:
    """Almost-sure bound on ``|D_e D_f K|``: ``32 pq`` for disjoint arcs.

    For arcs ``e = u_e v`` and ``f = u_f v`` sharing ``v`` it is
    ``pq (10 W2 + 8)`` with ``W2`` the number of ``u_e``-``u_f`` paths of
    length 2 in the graph with both arcs present (the path through ``v``
    included).
    """
    e, f = _arc(e), _arc(f)
    pq = p * (1 - p)
    v = e.shared_node(f)
    if v is None:
        return 32 * pq
    ue = e.u if e.v == v else e.v
    uf = f.u if f.v == v else f.v
    both = g.toggle_arc(e, True).toggle_arc(f, True)
    return pq * (10 * both.path_count(ue, uf, 2) + 8)


def discrete_gradient(g: Graph, e, model: str = "polytope", order: Optional[ArcOrder] = None,
                      p: float = 0.5, method: str = "dense") -> GradientSample:
    """``D_e K = sqrt(pq) (K(g + e) - K(g - e))`` with its almost-sure bound."""
    _check_model(model, order, g)
    e = _arc(e)
    delta = (edge_total(g.toggle_arc(e, True), model, order, method)
             - edge_total(g.toggle_arc(e, False), model, order, method))
    return GradientSample(e, None, math.sqrt(p * (1 - p)) * delta, delta,
                          first_gradient_bound(g, e, model, p))


def second_gradient(g: Graph, e, f, model: str = "polytope", order: Optional[ArcOrder] = None,
                    p: float = 0.5, method: str = "dense") -> GradientSample:
    """``D_e D_f K = pq (K++ - K+- - K-+ + K--)``; zero when ``e == f``."""
    _check_model(model, order, g)
    e, f = _arc(e), _arc(f)
    if e == f:
        return GradientSample(e, f, 0.0, 0, 0.0)
    total = 0
    for se, sf, sign in ((True, True, 1), (True, False, -1), (False, True, -1), (False, False, 1)):
        total += sign * edge_total(g.toggle_arc(e, se).toggle_arc(f, sf), model, order, method)
    pq = p * (1 - p)
    return GradientSample(e, f, pq * total, total, second_gradient_bound(g, e, f, p))


# -- pattern classes ---------------------------------------------------------

@dataclass(frozen=True)
class PatternClass:
    """One orbit of arc tuples; ``arcs`` is a representative on nodes ``0..nodes-1``."""

    arcs: tuple
    nodes: int
    labelled_count: int

    def cardinality(self, n: int) -> int:
        return self.labelled_count * math.comb(n, self.nodes)


def _relabel(tup, perm):
    out = []
    for a, b in tup:
        x, y = perm[a], perm[b]
        out.append((x, y) if x < y else (y, x))
    return tuple(out)


def _pattern_classes(length: int, admissible) -> tuple:
    classes = []
    for v in range(2, 2 * length + 1):
        arcs = list(itertools.combinations(range(v), 2))
        perms = list(itertools.permutations(range(v)))
        seen = set()
        for tup in itertools.product(arcs, repeat=length):
            if tup in seen or not admissible(tup):
                continue
            if len({x for a in tup for x in a}) != v:
                continue
            orbit = {_relabel(tup, perm) for perm in perms}
            seen |= orbit
            classes.append(PatternClass(tup, v, len(orbit)))
    return tuple(classes)


def arc_classes() -> tuple:
    return _pattern_classes(1, lambda t: True)


def pair_classes() -> tuple:
    """Orbits of ordered pairs ``(k, l)`` of distinct arcs."""
    return _pattern_classes(2, lambda t: t[0] != t[1])


def triple_classes() -> tuple:
    """Orbits of ordered triples ``(j, k, l)`` with ``l`` distinct from ``j`` and ``k``."""
    return _pattern_classes(3, lambda t: t[2] != t[0] and t[2] != t[1])


_CLASS_CACHE: dict = {}


def _classes():
    if not _CLASS_CACHE:
        _CLASS_CACHE["arc"] = arc_classes()
        _CLASS_CACHE["pair"] = pair_classes()
        _CLASS_CACHE["triple"] = triple_classes()
    return _CLASS_CACHE["arc"], _CLASS_CACHE["pair"], _CLASS_CACHE["triple"]


# -- estimation --------------------------------------------------------------

class _ForcedTotals:
    """``K`` of one sampled graph with up to two arcs forced, memoised per state."""

    def __init__(self, adjacency, model):
        self.base = np.array(adjacency, dtype=np.uint8)
        self.model = model
        self.cache = {}

    def total(self, state) -> int:
        key = tuple(sorted(state))
        hit = self.cache.get(key)
        if hit is None:
            a = self.base.copy()
            for (u, v), present in key:
                a[u, v] = a[v, u] = present
            hit = self.cache[key] = model_total(a, self.model)
        return hit

    def d1(self, k) -> int:
        return self.total(((k, 1),)) - self.total(((k, 0),))

    def d2(self, k, l) -> int:
        t = self.total
        return t(((k, 1), (l, 1))) - t(((k, 1), (l, 0))) - t(((k, 0), (l, 1))) + t(((k, 0), (l, 0)))


def _replicate_moments(forced: _ForcedTotals, arc_cls, pair_cls, triple_cls):
    """Per-class raw moments of unscaled gradients for one graph."""
    d1 = {}
    d2 = {}

    def g1(k):
        if k not in d1:
            d1[k] = forced.d1(k)
        return d1[k]

    def g2(k, l):
        key = (k, l) if k <= l else (l, k)
        if key not in d2:
            d2[key] = forced.d2(*key)
        return d2[key]

    arc4 = [float(g1(c.arcs[0])) ** 4 for c in arc_cls]
    pair = []
    for c in pair_cls:
        k, l = c.arcs
        pair.append((float(g1(k)) ** 4, float(g2(l, k)) ** 4))
    triple = []
    for c in triple_cls:
        j, k, l = c.arcs
        triple.append((float(g1(j) * g1(k)) ** 2, float(g2(l, j) * g2(l, k)) ** 2))
    return arc4, pair, triple


@dataclass
class SteinTerms:
    B1: float
    B2: float
    B3: float
    B4: float
    B5: float
    kolmogorov_bound: float
    stderr: dict = field(default_factory=dict)
    replicates: int = 0
    pilot_replicates: int = 0
    pilot_mean: float = math.nan
    pilot_sd: float = math.nan
    pilot_mean_stderr: float = math.nan
    pilot_sd_stderr: float = math.nan
    classes: dict = field(default_factory=dict)

    def terms(self) -> tuple:
        return (self.B1, self.B2, self.B3, self.B4, self.B5)


def assemble_bound(b1, b2, b3, b4, b5) -> float:
    return sum(c * math.sqrt(b) for c, b in zip(KOLMOGOROV_CONSTANTS, (b1, b2, b3, b4, b5)))


def _b_terms(n, p, sigma, arc_cls, pair_cls, triple_cls, arc_m, pair_m, triple_m):
    """Assemble B1..B5 from class means of raw moments (arrays indexed like the classes)."""
    pq = p * (1 - p)
    s4 = sigma**4
    b3 = math.fsum(c.cardinality(n) * m for c, m in zip(arc_cls, arc_m)) * pq / s4
    b4 = math.fsum(c.cardinality(n) * math.sqrt(a * b)
                   for c, (a, b) in zip(pair_cls, pair_m)) * pq**2 / s4
    b5 = math.fsum(c.cardinality(n) * b for c, (a, b) in zip(pair_cls, pair_m)) * pq**2 / s4
    b1 = math.fsum(c.cardinality(n) * math.sqrt(a * b)
                   for c, (a, b) in zip(triple_cls, triple_m)) * pq**3 / s4
    b2 = math.fsum(c.cardinality(n) * b for c, (a, b) in zip(triple_cls, triple_m)) * pq**3 / s4
    return b1, b2, b3, b4, b5


def _column_means(rows):
    arr = np.asarray(rows, dtype=np.float64)
    if arr.size == 0:
        return arr
    # fsum over replicates in index order: independent of how they were produced
    return np.apply_along_axis(math.fsum, 0, arr) / arr.shape[0]


def estimate_stein_terms(params: SimParams, model: str = "polytope", replicates: int = 1000,
                         pilot_replicates: int = 500, batches: int = 20) -> SteinTerms:
    """Stratified Monte Carlo estimate of B1..B5 and the assembled Kolmogorov bound.

    ``sigma`` comes from an independent pilot ensemble; its sampling error
    is reported next to the terms.  ``stderr`` holds batch-means standard
    errors (``nan`` when fewer than two batches fit).  The triangulation
    total does not depend on the arc order, so no order is drawn.
    """
    if replicates < 1:
        raise ValueError("replicates must be at least 1")
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")
    n, p = params.n, params.p
    arc_cls, pair_cls, triple_cls = (tuple(c for c in cls if c.nodes <= n) for cls in _classes())

    arc_rows, pair_rows, triple_rows = [], [], []
    for i in range(replicates):
        forced = _ForcedTotals(sample_adjacency(params, i, STREAM_GRAPH), model)
        a4, pr, tr = _replicate_moments(forced, arc_cls, pair_cls, triple_cls)
        arc_rows.append(a4)
        pair_rows.append(pr)
        triple_rows.append(tr)

    pilot = None
    if pilot_replicates >= 2:
        pilot = summarize([model_total(sample_adjacency(params, i, STREAM_PILOT), model)
                           for i in range(pilot_replicates)], keep_samples=False)

    class_info = {"arc": len(arc_cls), "pair": len(pair_cls), "triple": len(triple_cls)}
    all_zero = not (np.any(arc_rows) or np.any(pair_rows) or np.any(triple_rows))
    if all_zero:
        zero = {name: 0.0 for name in ("B1", "B2", "B3", "B4", "B5")}
        return SteinTerms(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, zero, replicates,
                          pilot_replicates, *_pilot_fields(pilot), class_info)
    if pilot is None or not pilot.sample_variance > 0:
        raise DegenerateVarianceError(
            "pilot variance estimate is not positive; increase pilot_replicates")
    sigma = math.sqrt(pilot.sample_variance)

    def terms_for(lo, hi):
        return _b_terms(n, p, sigma, arc_cls, pair_cls, triple_cls,
                        _column_means(arc_rows[lo:hi]),
                        [tuple(x) for x in _column_means(pair_rows[lo:hi])],
                        [tuple(x) for x in _column_means(triple_rows[lo:hi])])

    b = terms_for(0, replicates)
    names = ("B1", "B2", "B3", "B4", "B5")
    nb = min(batches, replicates // 2)
    if nb >= 2:
        edges = [replicates * k // nb for k in range(nb + 1)]
        per_batch = np.array([terms_for(edges[k], edges[k + 1]) for k in range(nb)])
        stderr = {name: float(np.std(per_batch[:, t], ddof=1) / math.sqrt(nb))
                  for t, name in enumerate(names)}
    else:
        stderr = {name: math.nan for name in names}
    return SteinTerms(*b, assemble_bound(*b), stderr, replicates, pilot_replicates,
                      *_pilot_fields(pilot), class_info)


def _pilot_fields(pilot):
    if pilot is None:
        return math.nan, math.nan, math.nan, math.nan
    sd = math.sqrt(pilot.sample_variance)
    # normal-theory standard error of a sample standard deviation
    sd_err = sd / math.sqrt(2 * (pilot.replicates - 1))
    return pilot.sample_mean, sd, pilot.standard_error_mean, sd_err
