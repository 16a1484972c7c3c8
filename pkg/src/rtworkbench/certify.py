"""Exact certifiers: cliques, independent sets, cuts, odd girth and the
K4-or-independent-set drill-downs.

Every certificate names concrete vertices, so it can be re-checked against
the graph with :meth:`Certificate.validate`.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable

import numpy as np

from . import _kernels
from .errors import InputError
from .graph import (
    Bipartition,
    BitGraph,
    VertexSet,
    as_fraction,
    as_mask,
    density_between,
    int_to_words,
    iter_bits,
    lowest_bit,
)
from .rng import stream


class Kind(str, Enum):
    K4 = "K4"
    TRIANGLE_IN_SIDE = "TriangleInSide"
    INDEPENDENT_SET = "IndependentSet"
    DENSITY_VIOLATION = "DensityViolation"
    CODEGREE_VIOLATION = "CodegreeViolation"
    L_TRIANGLE_VIOLATION = "LTriangleViolation"
    NO_WITNESS = "NoWitness"


@dataclass(frozen=True)
class Certificate:
    kind: Kind
    vertices: tuple[int, ...] = ()
    context: dict[str, Any] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.kind is not Kind.NO_WITNESS

    def validate(self, g: BitGraph, side: VertexSet | Iterable[int] | None = None) -> bool:
        vs = self.vertices
        if len(set(vs)) != len(vs) or any(not 0 <= v < g.n for v in vs):
            return False
        rows = g.rows
        mask = sum(1 << v for v in vs)
        if self.kind is Kind.INDEPENDENT_SET:
            return not any(rows[v] & mask for v in vs)
        # a clique: each vertex sees all the others
        clique = all((rows[v] | 1 << v) & mask == mask for v in vs)
        if self.kind is Kind.K4:
            return len(vs) == 4 and clique
        if self.kind is Kind.TRIANGLE_IN_SIDE:
            inside = side is None or mask & ~as_mask(g.n, side) == 0
            return len(vs) == 3 and inside and clique
        return True

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "vertices": list(self.vertices), "context": self.context}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


NO_WITNESS = Certificate(Kind.NO_WITNESS)


def _independent(vertices: Iterable[int], **context) -> Certificate:
    return Certificate(Kind.INDEPENDENT_SET, tuple(sorted(vertices)), context)


# -- cliques ------------------------------------------------------------------


def find_k4(g: BitGraph) -> Certificate:
    """Lexicographically least K4, or NoWitness."""
    if g.n < 4:
        return NO_WITNESS
    hit = _kernels.first_k4(g.words)
    if hit[0] < 0:
        return NO_WITNESS
    return Certificate(Kind.K4, tuple(int(v) for v in hit))


def find_triangle_in(g: BitGraph, side: VertexSet | Iterable[int] | None = None) -> Certificate:
    """Lexicographically least triangle with all vertices in ``side`` (default: anywhere)."""
    mask = (1 << g.n) - 1 if side is None else as_mask(g.n, side)
    if g.n < 3 or mask.bit_count() < 3:
        return NO_WITNESS
    hit = _kernels.first_triangle_in(g.words, int_to_words(mask, g.n))
    if hit[0] < 0:
        return NO_WITNESS
    return Certificate(Kind.TRIANGLE_IN_SIDE, tuple(int(v) for v in hit))


def _edge_inside(g: BitGraph, mask: int) -> tuple[int, int] | None:
    rows = g.rows
    for a in iter_bits(mask):
        nb = rows[a] & mask & ~((2 << a) - 1)
        if nb:
            return a, lowest_bit(nb)
    return None


def drill_common(g: BitGraph, u: int, v: int, common: int, **context) -> Certificate:
    """Edge inside ``common`` closes a K4 with ``u, v``; otherwise ``common`` is independent."""
    edge = _edge_inside(g, common)
    if edge is not None:
        return Certificate(Kind.K4, tuple(sorted((u, v, *edge))), context)
    return _independent(iter_bits(common), **context)


# -- maximum independent set ----------------------------------------------------


@dataclass(frozen=True)
class MISResult:
    alpha: int
    witness: VertexSet
    nodes: int


@dataclass(frozen=True)
class BudgetExceeded:
    nodes: int
    lower_bound: int
    witness: VertexSet


def _greedy_independent(rows, mask: int) -> int:
    """Min-degree greedy independent set inside ``mask``."""
    chosen = 0
    while mask:
        v = min(iter_bits(mask), key=lambda x: ((rows[x] & mask).bit_count(), x))
        chosen |= 1 << v
        mask &= ~(rows[v] | (1 << v))
    return chosen


def _clique_cover(rows, mask: int, limit: int | None = None) -> int:
    """Greedy clique cover size of ``mask``; stops early once it passes ``limit``."""
    k = 0
    while mask:
        k += 1
        if limit is not None and k > limit:
            break
        v = lowest_bit(mask)
        mask ^= 1 << v
        q = rows[v] & mask
        while q:
            w = lowest_bit(q)
            mask ^= 1 << w
            q &= rows[w]
    return k


def clique_cover_bound(g: BitGraph, within: VertexSet | Iterable[int] | None = None) -> int:
    """Greedy clique-cover size: an upper bound on the independence number."""
    mask = (1 << g.n) - 1 if within is None else as_mask(g.n, within)
    return _clique_cover(g.rows, mask)


def exact_mis(g: BitGraph, budget: int = 10_000_000) -> MISResult | BudgetExceeded:
    """Maximum independent set by branch and bound.

    Branches on a maximum-degree vertex (least index on ties), includes
    before excluding, and prunes with a greedy clique-cover bound.  When more
    than ``budget`` search nodes are needed the best set found so far is
    returned inside :class:`BudgetExceeded`.
    """
    rows = g.rows
    best = _greedy_independent(rows, (1 << g.n) - 1)
    best_size = best.bit_count()
    nodes = 0
    stack = [(0, (1 << g.n) - 1)]
    while stack:
        cur, cand = stack.pop()
        nodes += 1
        if nodes > budget:
            return BudgetExceeded(nodes - 1, best_size, VertexSet(g.n, best))
        while True:
            top_v, top_d, isolated = -1, -1, 0
            for v in iter_bits(cand):
                d = (rows[v] & cand).bit_count()
                if d == 0:
                    isolated |= 1 << v
                elif d > top_d:
                    top_v, top_d = v, d
            if not isolated:
                break
            cur |= isolated
            cand &= ~isolated
        if top_v < 0:
            if cur.bit_count() > best_size:
                best, best_size = cur, cur.bit_count()
            continue
        room = best_size - cur.bit_count()
        if _clique_cover(rows, cand, room) <= room:
            continue
        bit = 1 << top_v
        stack.append((cur, cand & ~bit))
        stack.append((cur | bit, cand & ~(rows[top_v] | bit)))
    return MISResult(best_size, VertexSet(g.n, best), nodes)


def mis_bounds(g: BitGraph, rounds: int = 3) -> tuple[VertexSet, int]:
    """Heuristic independent set (greedy plus 1-for-2 swaps) and a clique-cover upper bound."""
    rows = g.rows
    full = (1 << g.n) - 1
    ind = _greedy_independent(rows, full)
    for _ in range(rounds):
        improved = False
        for x in list(iter_bits(ind)):
            rest = ind & ~(1 << x)
            # vertices whose only neighbor in the set is x
            free = [w for w in iter_bits(full & ~ind & ~(1 << x)) if not rows[w] & rest and rows[w] >> x & 1]
            free_mask = sum(1 << w for w in free)
            for w in free:
                others = free_mask & ~rows[w] & ~(1 << w)
                if others:
                    ind = rest | (1 << w) | (1 << lowest_bit(others))
                    improved = True
                    break
            if improved:
                break
        if not improved:
            break
    return VertexSet(g.n, ind), clique_cover_bound(g)


# -- peeling and cuts ---------------------------------------------------------


@dataclass(frozen=True)
class PeelResult:
    surviving: VertexSet
    n_prime: int
    e_prime: int
    min_degree: int
    threshold: Fraction


def peel_min_degree(g: BitGraph, m: int, n: int | None = None) -> PeelResult:
    """Repeatedly delete the least-index vertex of degree at most ``m/n``."""
    n = g.n if n is None else n
    if n != g.n:
        raise InputError(f"n={n} does not match the graph's {g.n} vertices")
    if m < 1 or m > g.num_edges:
        raise InputError(f"need 1 <= m <= e(G) = {g.num_edges}, got m={m}")
    deg = g.degrees.astype(np.int64).copy()
    alive = np.ones(n, dtype=bool)
    # deg <= m/n  <=>  deg * n <= m, kept in integers
    heap = [v for v in range(n) if deg[v] * n <= m]
    heapq.heapify(heap)
    queued = np.zeros(n, dtype=bool)
    queued[heap] = True
    dense = g.dense
    while heap:
        v = heapq.heappop(heap)
        alive[v] = False
        nbrs = np.flatnonzero(dense[v] & alive)
        deg[nbrs] -= 1
        for u in nbrs[(deg[nbrs] * n <= m) & ~queued[nbrs]].tolist():
            queued[u] = True
            heapq.heappush(heap, u)
    keep = np.flatnonzero(alive)
    sub = dense[np.ix_(keep, keep)]
    e_prime = int(sub.sum()) // 2
    min_deg = int(sub.sum(axis=1).min()) if len(keep) else 0
    return PeelResult(VertexSet.of(n, keep.tolist()), len(keep), e_prime, min_deg, Fraction(m, n))


@dataclass(frozen=True)
class MaxCutResult:
    cut: Bipartition
    crossing: int
    locally_optimal: bool
    moves: int = 0


def cut_crossing(g: BitGraph, cut: Bipartition) -> int:
    lm = cut.left.mask
    rm = cut.right.mask
    return sum((g.rows[v] & rm).bit_count() for v in iter_bits(lm))


def is_locally_optimal(g: BitGraph, cut: Bipartition) -> bool:
    """No single vertex has more neighbors on its own side than across."""
    lm = cut.left.mask
    for v in range(g.n):
        same = lm if lm >> v & 1 else ~lm & ((1 << g.n) - 1)
        if (g.rows[v] & same).bit_count() > (g.rows[v] & ~same).bit_count():
            return False
    return True


def local_max_cut(g: BitGraph, seed: int = 0, start: Bipartition | VertexSet | Iterable[int] | None = None) -> MaxCutResult:
    """One-flip local search from a seeded random (or given) bipartition.

    The least-index vertex with more same-side than cross neighbors moves
    until none is left; each move raises the cut by at least one edge.
    """
    n = g.n
    if start is None:
        side = stream(seed, "maxcut").random(n) < 0.5
    else:
        left = start.left if isinstance(start, Bipartition) else start
        side = np.zeros(n, dtype=bool)
        side[VertexSet(n, as_mask(n, left)).to_list()] = True
    a = g.dense.astype(np.int64)
    deg = g.degrees.astype(np.int64)
    # same[v] = neighbors of v on v's side
    in_left = a @ side.astype(np.int64)
    same = np.where(side, in_left, deg - in_left)
    moves = 0
    while True:
        gain = 2 * same - deg
        cand = np.flatnonzero(gain > 0)
        if not len(cand):
            break
        v = int(cand[0])
        row = a[v].astype(bool)
        was = side[v]
        # neighbors on v's old side lose a same-side neighbor, the rest gain one
        old = row & (side == was)
        new = row & (side != was)
        same[old] -= 1
        same[new] += 1
        same[v] = deg[v] - same[v]
        side[v] = not was
        moves += 1
    cut = Bipartition.from_left(n, np.flatnonzero(side).tolist())
    crossing = int(deg.sum() - same.sum()) // 2
    return MaxCutResult(cut, crossing, bool((2 * same <= deg).all()), moves)


# -- the K4-or-independent-set certifiers --------------------------------------


def check_codegree_bound(g: BitGraph, alpha: int) -> Certificate:
    """First edge (lexicographic) whose endpoints share more than ``alpha`` neighbors.

    Such an edge forces a K4 or an independent set larger than ``alpha``;
    the common neighborhood is searched for whichever one it is.
    """
    edges = np.array(g.edges(), dtype=np.int64).reshape(-1, 2)
    if not len(edges):
        return NO_WITNESS
    cg = _kernels.edge_codegrees(g.words, edges[:, 0].copy(), edges[:, 1].copy())
    over = np.flatnonzero(cg > alpha)
    if not len(over):
        return NO_WITNESS
    u, v = map(int, edges[over[0]])
    common = g.rows[u] & g.rows[v]
    return drill_common(g, u, v, common, violation=Kind.CODEGREE_VIOLATION.value, edge=[u, v],
                        codegree=int(cg[over[0]]), alpha=alpha)


def check_pair_density(g: BitGraph, x, y, gamma, t) -> Certificate:
    """Density between equal parts of size n/t exceeding 1/2 + gamma t forces a witness."""
    n = g.n
    xm, ym = as_mask(n, x), as_mask(n, y)
    gamma, t = as_fraction(gamma), as_fraction(t)
    size = xm.bit_count()
    if xm & ym:
        raise InputError("parts overlap")
    if size == 0 or size != ym.bit_count() or size * t != n:
        raise InputError(f"parts must both have size n/t = {Fraction(n) / t}")
    if gamma * t > 1:
        raise InputError("need gamma * t <= 1")
    dens = density_between(g, xm, ym)
    bound = Fraction(1, 2) + gamma * t
    ctx = {"density": str(dens), "bound": str(bound)}
    if dens <= bound:
        return Certificate(Kind.NO_WITNESS, (), ctx)
    high = Fraction(n) / (2 * t) + gamma * n / 2
    a_mask = 0
    for v in iter_bits(xm):
        if (g.rows[v] & ym).bit_count() > high:
            a_mask |= 1 << v
    edge = _edge_inside(g, a_mask)
    if edge is not None:
        u, v = edge
        common = g.rows[u] & g.rows[v] & ym
        return drill_common(g, u, v, common, violation=Kind.DENSITY_VIOLATION.value, edge=[u, v], **ctx)
    if a_mask.bit_count() > gamma * n:
        return _independent(iter_bits(a_mask), violation=Kind.DENSITY_VIOLATION.value, **ctx)
    # unreachable when the arithmetic above is right; reported rather than hidden
    return Certificate(Kind.DENSITY_VIOLATION, tuple(iter_bits(a_mask)), ctx)


def check_L_triangle(g: BitGraph, L, alpha: int) -> Certificate:
    """Triangle whose L-degrees sum past |L| + 3 alpha forces a K4 or independent set."""
    lm = as_mask(g.n, L)
    rows = g.rows
    ld = [(r & lm).bit_count() for r in rows]
    limit = lm.bit_count() + 3 * alpha
    top = max(ld, default=0)
    for a in range(g.n):
        if ld[a] + 2 * top <= limit:
            continue
        for b in iter_bits(rows[a] & ~((2 << a) - 1)):
            if ld[a] + ld[b] + top <= limit:
                continue
            for c in iter_bits(rows[a] & rows[b] & ~((2 << b) - 1)):
                total = ld[a] + ld[b] + ld[c]
                if total <= limit:
                    continue
                ctx = {"violation": Kind.L_TRIANGLE_VIOLATION.value, "triangle": [a, b, c],
                       "degree_sum": total, "limit": limit}
                for p, q in ((a, b), (a, c), (b, c)):
                    common = rows[p] & rows[q] & lm
                    if common.bit_count() > alpha:
                        return drill_common(g, p, q, common, **ctx)
                return Certificate(Kind.L_TRIANGLE_VIOLATION, (a, b, c), ctx)
    return NO_WITNESS


# -- odd girth -------------------------------------------------------------------


def odd_girth(g: BitGraph) -> float:
    """Length of the shortest odd cycle (``math.inf`` for bipartite graphs).

    BFS from every root; an edge inside BFS layer ``d`` closes an odd walk of
    length ``2d + 1``, and the minimum over all roots is the odd girth.
    """
    rows = g.rows
    best = math.inf
    for s in range(g.n):
        seen = 1 << s
        layer = 1 << s
        d = 0
        while layer and 2 * d + 1 < best:
            if any(rows[v] & layer for v in iter_bits(layer)):
                best = 2 * d + 1
                break
            nxt = 0
            for v in iter_bits(layer):
                nxt |= rows[v]
            nxt &= ~seen
            seen |= nxt
            layer = nxt
            d += 1
    return best


def shearer_bound(n: int, odd_girth: float) -> float:
    """Independence lower bound 1/2 n^(1 - 1/k) for odd girth 2k + 3."""
    if odd_girth == math.inf:
        return n / 2
    if odd_girth != int(odd_girth) or int(odd_girth) % 2 == 0 or odd_girth < 5:
        raise InputError(f"odd girth must be an odd integer >= 5, got {odd_girth}")
    k = (int(odd_girth) - 3) // 2
    return 0.5 * n ** (1 - 1 / k)


# -- intersection chain along walks -------------------------------------------


@dataclass(frozen=True)
class ChainRow:
    i: int
    j: int
    k: int
    intersection: int
    bound: Fraction
    ok: bool


@dataclass(frozen=True)
class ChainReport:
    rows: list[ChainRow]
    holds: bool
    first_violation: ChainRow | None


def chain_gamma(k: int, gamma) -> Fraction:
    return (10 + 40020 * (k - 1)) * as_fraction(gamma)


def check_intersection_chain(g: BitGraph, X, Y, gamma, walk: list[int]) -> ChainReport:
    """Check |Y_i & Y_{i+2k-1}| <= (10 + 40020 (k-1)) gamma |Y| along a walk in X.

    ``Y_i`` is the neighborhood of the i-th walk vertex inside ``Y``.
    """
    xm, ym = as_mask(g.n, X), as_mask(g.n, Y)
    gamma = as_fraction(gamma)
    ysize = ym.bit_count()
    floor = (Fraction(1, 2) - 20000 * gamma) * ysize
    if not walk:
        raise InputError("walk is empty")
    for idx, v in enumerate(walk):
        if not xm >> v & 1:
            raise InputError(f"walk vertex {v} (position {idx}) is not in X")
        if (g.rows[v] & ym).bit_count() < floor:
            raise InputError(f"walk vertex {v} (position {idx}) has Y-degree below {floor}")
        if idx and not g.has_edge(walk[idx - 1], v):
            raise InputError(f"walk step {walk[idx - 1]} -> {v} is not an edge")
    nbhd = [g.rows[v] & ym for v in walk]
    rows = []
    for i in range(len(walk)):
        k = 1
        while i + 2 * k - 1 < len(walk):
            j = i + 2 * k - 1
            size = (nbhd[i] & nbhd[j]).bit_count()
            bound = chain_gamma(k, gamma) * ysize
            rows.append(ChainRow(i, j, k, size, bound, size <= bound))
            k += 1
    bad = next((r for r in rows if not r.ok), None)
    return ChainReport(rows, bad is None, bad)
