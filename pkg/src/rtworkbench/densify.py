"""Hybrid densification of nice graphs.

Pick ``U1`` in X and ``U2`` in Y, each of size ``d``.  Every edge inside a
side that touches the chosen set is dropped and the chosen set is joined to
the whole opposite side.  The result is again nice, has
``e(G0) + d n - d^2`` edges, and its independence number grows by at most ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .construct import NiceGraph, verify_nice
from .errors import InputError
from .graph import BitGraph, VertexSet, as_fraction, pack_rows
from .rng import stream


@dataclass(frozen=True)
class DensifyParams:
    d: int
    trials: int = 16
    seed: int = 0

    def __post_init__(self):
        if self.d < 0:
            raise InputError("layer size d must be non-negative")
        if self.trials < 1:
            raise InputError("need at least one trial")
        if self.seed < 0:
            raise InputError("seed must be non-negative")


@dataclass(frozen=True)
class DensifyRecord:
    U1: VertexSet
    U2: VertexSet
    e_before: int
    e_after: int
    e_G0: int
    lemma_rhs: Fraction
    averaging_floor: Fraction

    def to_dict(self) -> dict:
        return {
            "U1": self.U1.to_list(),
            "U2": self.U2.to_list(),
            "e_before": self.e_before,
            "e_after": self.e_after,
            "e_G0": self.e_G0,
            "lemma_rhs": str(self.lemma_rhs),
            "averaging_floor": str(self.averaging_floor),
        }


def _check_hypotheses(n: int, d) -> None:
    if n < 6 or n % 2:
        raise InputError(f"n must be even and at least 6, got {n}")
    if d < 0 or 2 * d > n:
        raise InputError(f"need 0 <= d <= n/2, got d={d}")


def hybrid_lower_bound(S, n: int, d: int) -> Fraction:
    """(1 - 2d/n)^2 S + d n - d^2 - n, exactly."""
    _check_hypotheses(n, d)
    S = as_fraction(S)
    return (1 - Fraction(2 * d, n)) ** 2 * S + d * n - d * d - n


def averaging_floor(e: int, n: int, d: int) -> Fraction:
    """Edges guaranteed to survive deleting the best pair of d-sets: (1 - 2d/n)^2 e - n."""
    _check_hypotheses(n, d)
    return (1 - Fraction(2 * d, n)) ** 2 * e - n


@dataclass(frozen=True)
class MarginCheck:
    factor: Fraction
    value: Fraction
    holds: bool


def critical_density_margin(n: int, delta) -> MarginCheck:
    """Evaluate (n^2/8)(1 + 48 delta^2 - 8/n - 128 delta^3) against n^2/8.

    Requires n^(-1/2) <= delta <= 1/4, checked exactly as delta^2 n >= 1.
    """
    if n < 6 or n % 2:
        raise InputError(f"n must be even and at least 6, got {n}")
    delta = as_fraction(delta)
    if delta > Fraction(1, 4) or delta <= 0 or delta * delta * n < 1:
        raise InputError(f"need n^(-1/2) <= delta <= 1/4, got delta={delta}")
    factor = 1 + 48 * delta**2 - Fraction(8, n) - 128 * delta**3
    return MarginCheck(factor, Fraction(n * n, 8) * factor, factor >= 1)


def above_critical_lower_bound(n: int, delta, a) -> Fraction:
    """(n^2/8)(1 + 4a - 4a^2 - 8 delta) for 1/(delta n) <= a <= 1/2."""
    if n < 6 or n % 2:
        raise InputError(f"n must be even and at least 6, got {n}")
    delta, a = as_fraction(delta), as_fraction(a)
    if delta <= 0 or a > Fraction(1, 2) or a * delta * n < 1:
        raise InputError(f"need 1/(delta n) <= a <= 1/2, got a={a}, delta={delta}")
    return Fraction(n * n, 8) * (1 + 4 * a - 4 * a * a - 8 * delta)


# -- choosing the layer ---------------------------------------------------------


def _surviving_edges(adj: np.ndarray, deg: np.ndarray, chosen: np.ndarray) -> int:
    # edges avoiding the chosen vertices: e - sum deg(U) + e(U)
    inside = int(adj[np.ix_(chosen, chosen)].sum()) // 2
    return int(deg.sum()) // 2 - int(deg[chosen].sum()) + inside


def _key(e_g0: int, u1: np.ndarray, u2: np.ndarray):
    return (-e_g0, tuple(sorted(u1.tolist())), tuple(sorted(u2.tolist())))


def _hill_climb(adj: np.ndarray, deg: np.ndarray, sides: list[np.ndarray], chosen: list[np.ndarray]):
    """Steepest single swaps inside each side; least (u, w) wins ties."""
    chosen = [c.copy() for c in chosen]
    while True:
        mask = np.zeros(len(deg), dtype=bool)
        for c in chosen:
            mask[c] = True
        du = adj[:, mask].sum(axis=1).astype(np.int64)
        best = None
        for i, (side, c) in enumerate(zip(sides, chosen)):
            outside = side[~mask[side]]
            if not len(c) or not len(outside):
                continue
            # gain of swapping u out for w: deg(u) - dU(u) - deg(w) + dU(w) - [u ~ w]
            gain = (deg[c] - du[c])[:, None] + (du[outside] - deg[outside])[None, :] - adj[np.ix_(c, outside)]
            top = gain.max()
            if top <= 0:
                continue
            rows, cols = np.nonzero(gain == top)
            pairs = sorted(zip(c[rows].tolist(), outside[cols].tolist()))
            cand = (-int(top), *pairs[0], i)
            if best is None or cand < best:
                best = cand
        if best is None:
            return chosen
        _, u, w, i = best
        c = chosen[i]
        c[c == u] = w
        chosen[i] = np.sort(c)


def choose_layer_sets(g: NiceGraph, p: DensifyParams) -> tuple[VertexSet, VertexSet, int]:
    """Pick U1 in X and U2 in Y of size d keeping as many edges as possible.

    Candidates are the lexicographically first sets, the d lowest-degree
    vertices of each side and ``p.trials`` uniform random draws; the best
    is then improved by single-vertex swaps.
    """
    n, d = g.n, p.d
    if 2 * d > n:
        raise InputError(f"need d <= n/2, got d={d}")
    adj = g.graph.dense.astype(np.int64)
    deg = g.graph.degrees.astype(np.int64)
    xs = np.array(g.X.to_list(), dtype=np.int64)
    ys = np.array(g.Y.to_list(), dtype=np.int64)
    cands = [(xs[:d], ys[:d])]
    cands.append((np.sort(xs[np.lexsort((xs, deg[xs]))[:d]]), np.sort(ys[np.lexsort((ys, deg[ys]))[:d]])))
    rng = stream(p.seed, "densify/layer")
    for _ in range(p.trials):
        cands.append((np.sort(rng.choice(xs, d, replace=False)), np.sort(rng.choice(ys, d, replace=False))))
    scored = [(_key(_surviving_edges(adj, deg, np.concatenate([a, b])), a, b), a, b) for a, b in cands]
    _, u1, u2 = min(scored, key=lambda t: t[0])
    u1, u2 = _hill_climb(adj, deg, [xs, ys], [u1, u2])
    e_g0 = _surviving_edges(adj, deg, np.concatenate([u1, u2]))
    return VertexSet.of(n, u1.tolist()), VertexSet.of(n, u2.tolist()), e_g0


def splice(g: NiceGraph, u1: VertexSet, u2: VertexSet) -> BitGraph:
    """Drop side edges touching the layer and join the layer to the opposite side."""
    a = g.graph.dense.copy()
    x = np.zeros(g.n, dtype=bool)
    x[g.X.to_list()] = True
    y = ~x
    for layer, own, other in ((u1, x, y), (u2, y, x)):
        idx = layer.to_list()
        a[np.ix_(idx, np.flatnonzero(own))] = False
        a[np.ix_(np.flatnonzero(own), idx)] = False
        a[np.ix_(idx, np.flatnonzero(other))] = True
        a[np.ix_(np.flatnonzero(other), idx)] = True
    return BitGraph(g.n, pack_rows(a))


def densify(g: NiceGraph, p: DensifyParams) -> tuple[NiceGraph, DensifyRecord]:
    """Splice a complete bipartite layer of size d into a nice graph."""
    n, d = g.n, p.d
    if 2 * d > n:
        raise InputError(f"need d <= n/2, got d={d}")
    bad = verify_nice(g)
    if bad.found:
        raise InputError(f"input graph is not nice: {bad.kind.value} at {list(bad.vertices)}")
    e = g.graph.num_edges
    if d == 0:
        empty = VertexSet(n, 0)
        floor = averaging_floor(e, n, 0) if n >= 6 else Fraction(e - n)
        rec = DensifyRecord(empty, empty, e, e, e, floor, floor)
        return NiceGraph(g.graph, g.split, rec), rec
    u1, u2, e_g0 = choose_layer_sets(g, p)
    out = splice(g, u1, u2)
    rec = DensifyRecord(u1, u2, e, out.num_edges, e_g0, hybrid_lower_bound(e, n, d), averaging_floor(e, n, d))
    result = NiceGraph(out, g.split, rec)
    bad = verify_nice(result)
    if bad.found:
        raise AssertionError(f"densified graph is not nice: {bad.kind.value} at {list(bad.vertices)}")
    return result, rec
