"""Simple undirected graphs with bit-packed adjacency rows, and G(n, p) sampling.

Nodes are 1-indexed in every public signature (``V = {1, ..., n}``) and
0-indexed internally.  Each adjacency row is a Python ``int`` used as a
bitset, so common-neighbour queries are a single AND plus ``bit_count``.

An arc ``{u, v}`` of G(n, p) is encoded by the Rademacher variable
``X = +1`` (present, probability ``p``) or ``X = -1`` (absent, probability
``q = 1 - p``).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

# Stream tags mixed into the seed sequence so that graphs, arc orders and
# pilot runs of the same replicate never share random numbers.
STREAM_GRAPH = 0
STREAM_ORDER = 1
STREAM_PILOT = 2


class EdgeListError(ValueError):
    """Malformed edge-list input."""


@dataclass(frozen=True)
class Arc:
    """Undirected arc ``{u, v}``; stored with ``u < v``."""

    u: int
    v: int

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError(f"loop arc {{{self.u}, {self.v}}} is not allowed")
        if self.u > self.v:
            a, b = self.v, self.u
            object.__setattr__(self, "u", a)
            object.__setattr__(self, "v", b)

    def __iter__(self):
        yield self.u
        yield self.v

    def nodes(self) -> frozenset:
        return frozenset((self.u, self.v))

    def shared_node(self, other: "Arc") -> Optional[int]:
        common = self.nodes() & other.nodes()
        return next(iter(common)) if len(common) == 1 else None

    def __str__(self):
        return f"{{{self.u},{self.v}}}"


def arc_index(n: int, u: int, v: int) -> int:
    """Position of the 0-indexed arc ``{u, v}`` in lexicographic order over C(n, 2)."""
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def arc_pairs(n: int) -> np.ndarray:
    """All 0-indexed arcs ``(u, v)``, ``u < v``, in lexicographic order; shape (C(n,2), 2)."""
    iu, iv = np.triu_indices(n, k=1)
    return np.stack([iu, iv], axis=1)


@dataclass(frozen=True)
class SimParams:
    """Parameters of one G(n, p) experiment."""

    n: int
    p: float
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie strictly between 0 and 1, got {self.p!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def q(self) -> float:
        return 1.0 - self.p


def replicate_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    """Counter-based generator for replicate ``index`` of ``stream``.

    The stream depends only on ``(seed, stream, index)``; no state is shared
    between replicates, so any partition of the work over processes yields
    the same draws.
    """
    ss = np.random.SeedSequence(seed, spawn_key=(stream, index))
    return np.random.Generator(np.random.Philox(ss))


def derived_seed(seed: int, stream: int, index: int) -> int:
    """A 64-bit seed derived from ``(seed, stream, index)``."""
    ss = np.random.SeedSequence(seed, spawn_key=(stream, index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph on nodes ``1..n``.

    ``rows[i]`` has bit ``j`` set iff nodes ``i+1`` and ``j+1`` are adjacent.
    """

    n: int
    rows: tuple
    m: int = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a graph needs at least one node")
        if len(self.rows) != self.n:
            raise ValueError("need exactly one adjacency row per node")
        full = (1 << self.n) - 1
        for i, r in enumerate(self.rows):
            if r & ~full or (r >> i) & 1:
                raise ValueError(f"row {i + 1} has a loop or an out-of-range bit")
            for j in _bits(r):
                if not (self.rows[j] >> i) & 1:
                    raise ValueError("adjacency is not symmetric")
        object.__setattr__(self, "m", sum(r.bit_count() for r in self.rows) // 2)

    # -- constructors -------------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << i) for i in range(n)))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable) -> "Graph":
        rows = [0] * n
        for a in arcs:
            u, v = _as_arc(a)
            _check_node(n, u)
            _check_node(n, v)
            rows[u - 1] |= 1 << (v - 1)
            rows[v - 1] |= 1 << (u - 1)
        return cls(n, tuple(rows))

    @classmethod
    def from_adjacency(cls, adjacency) -> "Graph":
        a = np.asarray(adjacency, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("adjacency must be a square matrix")
        n = a.shape[0]
        packed = np.packbits(a, axis=1, bitorder="little")
        rows = tuple(int.from_bytes(packed[i].tobytes(), "little") for i in range(n))
        return cls(n, rows)

    # -- queries ------------------------------------------------------------

    def has_arc(self, a) -> bool:
        u, v = _as_arc(a)
        _check_node(self.n, u)
        _check_node(self.n, v)
        return bool((self.rows[u - 1] >> (v - 1)) & 1)

    def adjacent(self, u: int, v: int) -> bool:
        """Like :meth:`has_arc` but for a raw node pair; ``u == v`` gives False."""
        _check_node(self.n, u)
        _check_node(self.n, v)
        return bool((self.rows[u - 1] >> (v - 1)) & 1)

    def neighbors(self, u: int) -> list:
        _check_node(self.n, u)
        return [j + 1 for j in _bits(self.rows[u - 1])]

    def degree(self, u: int) -> int:
        _check_node(self.n, u)
        return self.rows[u - 1].bit_count()

    def arcs(self) -> list:
        """Present arcs in lexicographic order."""
        out = []
        for i, r in enumerate(self.rows):
            for j in _bits(r >> (i + 1)):
                out.append(Arc(i + 1, i + j + 2))
        return out

    def toggle_arc(self, a, present: bool) -> "Graph":
        """Copy of the graph with arc ``a`` forced present or absent."""
        u, v = _as_arc(a)
        _check_node(self.n, u)
        _check_node(self.n, v)
        if self.adjacent(u, v) == bool(present):
            return self
        rows = list(self.rows)
        rows[u - 1] ^= 1 << (v - 1)
        rows[v - 1] ^= 1 << (u - 1)
        return Graph(self.n, tuple(rows))

    def common_neighbor_count(self, u: int, v: int, excluded: Optional[int] = None) -> int:
        """Number of ``w`` outside ``{u, v, excluded}`` adjacent to both ``u`` and ``v``."""
        if u == v:
            raise ValueError("common_neighbor_count needs two distinct nodes")
        _check_node(self.n, u)
        _check_node(self.n, v)
        both = self.rows[u - 1] & self.rows[v - 1]
        if excluded is not None:
            _check_node(self.n, excluded)
            both &= ~(1 << (excluded - 1))
        return both.bit_count()

    def path_count(self, s: int, t: int, length: int) -> int:
        """Number of s-t paths with ``length`` arcs and pairwise distinct nodes (2 or 3)."""
        if s == t:
            raise ValueError("path_count needs distinct endpoints")
        _check_node(self.n, s)
        _check_node(self.n, t)
        if length == 2:
            return (self.rows[s - 1] & self.rows[t - 1]).bit_count()
        if length == 3:
            avoid = ~((1 << (s - 1)) | (1 << (t - 1)))
            total = 0
            for w in _bits(self.rows[s - 1] & avoid):
                # w adjacent to s; count x adjacent to both w and t, x not in {s, t}
                total += (self.rows[w] & self.rows[t - 1] & avoid).bit_count()
            return total
        raise ValueError(f"unsupported path length {length}; use 2 or 3")

    # -- conversions --------------------------------------------------------

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency as a read-only ``uint8`` array."""
        nbytes = (self.n + 7) // 8
        buf = b"".join(r.to_bytes(nbytes, "little") for r in self.rows)
        a = np.unpackbits(np.frombuffer(buf, dtype=np.uint8).reshape(self.n, nbytes),
                          axis=1, bitorder="little", count=self.n)
        a.setflags(write=False)
        return a

    def relabel(self, perm) -> "Graph":
        """Image under the node permutation ``i -> perm[i-1]`` (1-indexed values)."""
        perm = list(perm)
        if sorted(perm) != list(range(1, self.n + 1)):
            raise ValueError("perm must be a permutation of 1..n")
        return Graph.from_arcs(self.n, [(perm[a.u - 1], perm[a.v - 1]) for a in self.arcs()])

    def to_edge_list(self) -> str:
        lines = [f"n={self.n}"] + [f"{a.u} {a.v}" for a in self.arcs()]
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, self.rows))

    def __repr__(self):
        arcs = " ".join(f"{a.u}-{a.v}" for a in self.arcs())
        return f"Graph(n={self.n}, m={self.m}, arcs=[{arcs}])"


def sample_adjacency(params: SimParams, replicate_index: int,
                     stream: int = STREAM_GRAPH) -> np.ndarray:
    """Dense symmetric 0/1 adjacency of replicate ``replicate_index`` of G(n, p)."""
    n = params.n
    rng = replicate_rng(params.seed, stream, replicate_index)
    present = rng.random(n * (n - 1) // 2) < params.p
    a = np.zeros((n, n), dtype=np.uint8)
    iu, iv = np.triu_indices(n, k=1)
    a[iu, iv] = present
    a[iv, iu] = present
    return a


def erdos_renyi(params: SimParams, replicate_index: int) -> Graph:
    """Replicate ``replicate_index`` of G(n, p); a pure function of ``(seed, index)``."""
    return Graph.from_adjacency(sample_adjacency(params, replicate_index))


def from_edge_list(text) -> Graph:
    """Parse the ``n=<int>`` / ``<u> <v>`` edge-list format.

    Lines starting with ``#`` and blank lines are skipped.  A repeated arc
    triggers a warning and is otherwise ignored.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    n = None
    arcs = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            key, sep, value = line.partition("=")
            if key.strip() != "n" or not sep:
                raise EdgeListError(f"line {lineno}: expected header 'n=<int>', got {line!r}")
            try:
                n = int(value)
            except ValueError:
                raise EdgeListError(f"line {lineno}: bad node count {value!r}") from None
            if n < 1:
                raise EdgeListError(f"line {lineno}: node count must be positive")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"line {lineno}: expected '<u> <v>', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: non-integer node in {line!r}") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise EdgeListError(f"line {lineno}: node out of range 1..{n}")
        if u == v:
            raise EdgeListError(f"line {lineno}: loop {u} {v} is not allowed")
        key = (min(u, v), max(u, v))
        if key in seen:
            warnings.warn(f"line {lineno}: duplicate arc {key[0]} {key[1]} ignored", stacklevel=2)
            continue
        seen.add(key)
        arcs.append(key)
    if n is None:
        raise EdgeListError("missing 'n=<int>' header")
    return Graph.from_arcs(n, arcs)


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _as_arc(a):
    if isinstance(a, Arc):
        return a.u, a.v
    u, v = a
    if u == v:
        raise ValueError(f"loop arc {{{u}, {v}}} is not allowed")
    return (u, v) if u < v else (v, u)


def _check_node(n: int, u: int):
    if not 1 <= u <= n:
        raise IndexError(f"node {u} out of range 1..{n}")
