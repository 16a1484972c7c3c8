"""Bitset graphs, vertex sets and the canonical graph JSON format."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InputError
from .rng import stream


def as_fraction(x) -> Fraction:
    """Exact rational for a threshold parameter; floats are read as their decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(repr(float(x)))
    return Fraction(x)


def _nwords(n: int) -> int:
    return max(1, (n + 63) // 64)


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lowest_bit(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def words_to_int(row: np.ndarray) -> int:
    return int.from_bytes(row.astype("<u8").tobytes(), "little")


def int_to_words(mask: int, n: int) -> np.ndarray:
    nw = _nwords(n)
    return np.frombuffer(mask.to_bytes(nw * 8, "little"), dtype="<u8").astype(np.uint64)


@dataclass(frozen=True)
class VertexSet:
    """A subset of ``0..n-1`` stored as a Python integer bitmask."""

    n: int
    mask: int = 0

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise InputError(f"vertex set has members outside 0..{self.n - 1}")

    @classmethod
    def of(cls, n: int, vertices: Iterable[int]) -> VertexSet:
        mask = 0
        for v in vertices:
            v = int(v)
            if not 0 <= v < n:
                raise InputError(f"vertex {v} outside 0..{n - 1}")
            mask |= 1 << v
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> VertexSet:
        return cls(n, (1 << n) - 1)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, v: object) -> bool:
        return isinstance(v, (int, np.integer)) and 0 <= v < self.n and bool(self.mask >> int(v) & 1)

    def __and__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.n, self.mask & other.mask)

    def __or__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.n, self.mask | other.mask)

    def __sub__(self, other: VertexSet) -> VertexSet:
        return VertexSet(self.n, self.mask & ~other.mask)

    def complement(self) -> VertexSet:
        return VertexSet(self.n, ((1 << self.n) - 1) & ~self.mask)

    def to_list(self) -> list[int]:
        return list(iter_bits(self.mask))

    def __repr__(self) -> str:
        return f"VertexSet(n={self.n}, {self.to_list()})"


def as_mask(n: int, s: VertexSet | Iterable[int] | int) -> int:
    """Normalize a vertex-set argument to an integer bitmask."""
    if isinstance(s, VertexSet):
        if s.n != n:
            raise InputError(f"vertex set over {s.n} vertices used with a graph on {n}")
        return s.mask
    if isinstance(s, int):
        if s < 0 or s >> n:
            raise InputError("bitmask has members outside the vertex range")
        return s
    return VertexSet.of(n, s).mask


@dataclass(frozen=True)
class Bipartition:
    left: VertexSet
    right: VertexSet

    def __post_init__(self):
        if self.left.n != self.right.n:
            raise InputError("sides live on different vertex ranges")
        if self.left.mask & self.right.mask:
            raise InputError("bipartition sides overlap")
        if (self.left.mask | self.right.mask) != (1 << self.left.n) - 1:
            raise InputError("bipartition sides do not cover the vertex set")

    @classmethod
    def from_left(cls, n: int, left: VertexSet | Iterable[int]) -> Bipartition:
        lv = VertexSet(n, as_mask(n, left))
        return cls(lv, lv.complement())

    @property
    def n(self) -> int:
        return self.left.n

    def side_of(self, v: int) -> int:
        return 0 if v in self.left else 1


class BitGraph:
    """Simple undirected graph on ``0..n-1`` with packed bitset adjacency.

    Immutable after construction. ``words`` has shape ``(n, ceil(n/64))``
    and dtype uint64; the Python-int view ``rows`` is built lazily for the
    pure-Python search routines.
    """

    def __init__(self, n: int, words: np.ndarray):
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (n, _nwords(n)):
            raise InputError(f"adjacency shape {words.shape} does not match n={n}")
        words.flags.writeable = False
        self.n = n
        self.words = words

    @cached_property
    def rows(self) -> tuple[int, ...]:
        return tuple(words_to_int(r) for r in self.words)

    @cached_property
    def dense(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros((0, 0), dtype=bool)
        bits = np.unpackbits(self.words.astype("<u8").view(np.uint8), axis=1, bitorder="little")
        out = bits[:, : self.n].astype(bool)
        out.flags.writeable = False
        return out

    @cached_property
    def degrees(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros(0, dtype=np.int64)
        d = np.bitwise_count(self.words).sum(axis=1).astype(np.int64)
        d.flags.writeable = False
        return d

    @cached_property
    def num_edges(self) -> int:
        return int(self.degrees.sum()) // 2

    def neighbors(self, v: int) -> VertexSet:
        return VertexSet(self.n, self.rows[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.words[u, v >> 6] >> np.uint64(v & 63) & np.uint64(1))

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        us, vs = np.nonzero(np.triu(self.dense, 1))
        return list(zip(us.tolist(), vs.tolist()))

    def min_degree(self) -> int:
        return int(self.degrees.min()) if self.n else 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BitGraph) and self.n == other.n and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.n, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BitGraph(n={self.n}, e={self.num_edges})"


# -- construction -----------------------------------------------------------


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> BitGraph:
    """Build a graph from an edge list; duplicate edges collapse silently."""
    if n < 0:
        raise InputError("vertex count must be non-negative")
    arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
    if arr.size:
        if arr.min() < 0 or arr.max() >= n:
            bad = arr[(arr < 0).any(axis=1) | (arr >= n).any(axis=1)][0]
            raise InputError(f"edge {tuple(bad.tolist())} has an endpoint outside 0..{n - 1}")
        loops = arr[arr[:, 0] == arr[:, 1]]
        if len(loops):
            raise InputError(f"self-loop at vertex {int(loops[0, 0])}")
    words = np.zeros((n, _nwords(n)), dtype=np.uint64)
    if arr.size:
        u = np.concatenate([arr[:, 0], arr[:, 1]])
        v = np.concatenate([arr[:, 1], arr[:, 0]])
        np.bitwise_or.at(words, (u, v >> 6), np.left_shift(np.uint64(1), (v & 63).astype(np.uint64)))
    return BitGraph(n, words)


def pack_rows(matrix: np.ndarray) -> np.ndarray:
    """Pack a boolean ``(k, n)`` matrix into ``(k, ceil(n/64))`` uint64 words."""
    k, n = matrix.shape
    padded = np.zeros((k, _nwords(n) * 64), dtype=bool)
    padded[:, :n] = matrix
    return np.packbits(padded, axis=1, bitorder="little").view("<u8").astype(np.uint64)


def from_dense(matrix: np.ndarray) -> BitGraph:
    """Build from a square boolean adjacency matrix (must be symmetric, zero diagonal)."""
    m = np.asarray(matrix, dtype=bool)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError("adjacency matrix must be square")
    if m.diagonal().any():
        raise InputError(f"self-loop at vertex {int(np.flatnonzero(m.diagonal())[0])}")
    if not np.array_equal(m, m.T):
        raise InputError("adjacency matrix is not symmetric")
    return BitGraph(m.shape[0], pack_rows(m))


def induced_subgraph(g: BitGraph, vertices: VertexSet | Iterable[int]) -> tuple[BitGraph, list[int]]:
    """Induced subgraph, relabelled ``0..k-1``; returns it with the old labels."""
    keep = VertexSet(g.n, as_mask(g.n, vertices)).to_list()
    sub = g.dense[np.ix_(keep, keep)]
    return BitGraph(len(keep), pack_rows(sub)), keep


def audit(g: BitGraph) -> list[str]:
    """Structural checks; returns a list of problems (empty when sound)."""
    problems = []
    n = g.n
    if n == 0:
        return problems
    spill = g.words[:, -1] >> np.uint64(n % 64) if n % 64 else np.zeros(n, dtype=np.uint64)
    if spill.any():
        problems.append("bits set beyond vertex range")
    m = g.dense
    if m.diagonal().any():
        problems.append(f"self-loop at {int(np.flatnonzero(m.diagonal())[0])}")
    if not np.array_equal(m, m.T):
        u, v = map(int, np.argwhere(m != m.T)[0])
        problems.append(f"asymmetric pair ({u}, {v})")
    if int(g.degrees.sum()) % 2:
        problems.append("odd degree sum")
    return problems


# -- elementary queries -----------------------------------------------------


def codegree(g: BitGraph, u: int, v: int) -> int:
    if u == v:
        raise InputError("codegree needs two distinct vertices")
    return (g.rows[u] & g.rows[v]).bit_count()


def cross_degree(g: BitGraph, v: int, s: VertexSet | Iterable[int]) -> int:
    return (g.rows[v] & as_mask(g.n, s)).bit_count()


def crossing_edges(g: BitGraph, x: VertexSet | Iterable[int], y: VertexSet | Iterable[int]) -> int:
    xm, ym = as_mask(g.n, x), as_mask(g.n, y)
    return sum((g.rows[v] & ym).bit_count() for v in iter_bits(xm))


def density_between(g: BitGraph, x: VertexSet | Iterable[int], y: VertexSet | Iterable[int]) -> Fraction:
    """Exact edge density between disjoint nonempty sets."""
    xm, ym = as_mask(g.n, x), as_mask(g.n, y)
    if not xm or not ym:
        raise InputError("density needs two nonempty sets")
    if xm & ym:
        raise InputError("density sets overlap")
    return Fraction(crossing_edges(g, xm, ym), xm.bit_count() * ym.bit_count())


# -- standard families ------------------------------------------------------


def empty_graph(n: int) -> BitGraph:
    return build_graph(n, [])


def complete_graph(n: int) -> BitGraph:
    return from_dense(~np.eye(n, dtype=bool))


def cycle_graph(n: int) -> BitGraph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_multipartite(sizes: Sequence[int]) -> BitGraph:
    labels = np.repeat(np.arange(len(sizes)), sizes)
    return from_dense(labels[:, None] != labels[None, :])


def complete_bipartite(a: int, b: int) -> BitGraph:
    return complete_multipartite([a, b])


def turan_graph(n: int, r: int) -> BitGraph:
    """Complete ``r``-partite graph with parts as equal as possible."""
    return complete_multipartite([n // r + (1 if i < n % r else 0) for i in range(r)])


def petersen_graph() -> BitGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(10, outer + spokes + inner)


def random_graph(n: int, p: float, seed: int) -> BitGraph:
    """Erdos-Renyi G(n, p), deterministic per seed."""
    rng = stream(seed, "graph/gnp")
    upper = np.triu(rng.random((n, n)) < p, 1)
    return from_dense(upper | upper.T)


# -- JSON ---------------------------------------------------------------------


def graph_to_dict(g: BitGraph, left: VertexSet | Iterable[int] | None = None) -> dict:
    out = {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}
    if left is not None:
        out["left"] = VertexSet(g.n, as_mask(g.n, left)).to_list()
    return out


def graph_to_json(g: BitGraph, left: VertexSet | Iterable[int] | None = None) -> str:
    """Canonical, byte-deterministic serialization."""
    return json.dumps(graph_to_dict(g, left), separators=(",", ":"))


def graph_from_dict(data: dict) -> tuple[BitGraph, VertexSet | None]:
    try:
        n = int(data["n"])
        edges = data["edges"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed graph record: {exc}") from None
    g = build_graph(n, edges)
    left = VertexSet.of(n, data["left"]) if "left" in data else None
    return g, left


def graph_from_json(text: str) -> tuple[BitGraph, VertexSet | None]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed graph JSON: {exc}") from None
    return graph_from_dict(data)
