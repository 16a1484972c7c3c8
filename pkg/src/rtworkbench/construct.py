"""Geometric K4-free graphs with triangle-free halves, built from sphere points.

Vertices ``0..n/2-1`` carry points ``x_i`` and ``n/2..n-1`` carry ``y_i``.
With ``mu = epsilon / sqrt(h)``:

* ``x_i ~ y_j``  iff  ``|x_i - y_j| < sqrt(2) - mu``
* ``x_i ~ x_j``  iff  ``|x_i - x_j| > 2 - mu``   (same for the ``y`` side)
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from .certify import NO_WITNESS, Certificate, find_k4, find_triangle_in
from .errors import InputError
from .geometry import SQRT2, SpherePointSet, cap_measure, sample_sphere_points
from .graph import Bipartition, BitGraph, VertexSet, density_between, graph_to_dict, pack_rows
from .report import BoundReport

# Above this mu three side points can be pairwise farther than 2 - mu apart,
# so the side graphs may contain triangles.
MU_LIMIT = 2.0 - math.sqrt(3.0)

_BLOCK = 1024


@dataclass(frozen=True)
class BEParams:
    n: int
    h: int
    epsilon: float
    seed: int = 0
    paired: bool = False
    mu: float = field(init=False)

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise InputError(f"n must be a positive even integer, got {self.n}")
        if self.h < 2:
            raise InputError("dimension h must be at least 2")
        if not 0 < self.epsilon < 1:
            raise InputError("epsilon must lie in (0, 1)")
        if self.seed < 0:
            raise InputError("seed must be non-negative")
        mu = self.epsilon / math.sqrt(self.h)
        if mu >= MU_LIMIT:
            raise InputError(f"mu = epsilon/sqrt(h) = {mu:.4f} must stay below 2 - sqrt(3) for triangle-free sides")
        object.__setattr__(self, "mu", mu)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class NiceGraph:
    graph: BitGraph
    split: Bipartition
    provenance: Any = None
    points: tuple[SpherePointSet, SpherePointSet] | None = None

    def __post_init__(self):
        if self.split.n != self.graph.n:
            raise InputError("bipartition does not cover the graph's vertices")
        if len(self.split.left) * 2 != self.graph.n:
            raise InputError("the two sides must each hold n/2 vertices")

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def X(self) -> VertexSet:
        return self.split.left

    @property
    def Y(self) -> VertexSet:
        return self.split.right

    def summary(self) -> dict:
        g = self.graph
        xs, ys = self.X.mask, self.Y.mask
        side_x = sum((g.rows[v] & xs).bit_count() for v in self.X) // 2
        side_y = sum((g.rows[v] & ys).bit_count() for v in self.Y) // 2
        half = g.n // 2
        pairs = half * (half - 1) // 2
        return {
            "n": g.n,
            "e": g.num_edges,
            "min_degree": g.min_degree(),
            "cross_density": float(density_between(g, self.X, self.Y)) if half else 0.0,
            "x_side_density": side_x / pairs if pairs else 0.0,
            "y_side_density": side_y / pairs if pairs else 0.0,
        }


def halves(n: int) -> Bipartition:
    return Bipartition.from_left(n, range(n // 2))


# For unit vectors |p - q|^2 = 2 - 2 <p, q>, so each distance rule is a
# threshold on the inner product.


def _side_block(p: np.ndarray, q: np.ndarray, limit_sq: float) -> np.ndarray:
    return p @ q.T < 1.0 - limit_sq / 2.0


def _cross_block(p: np.ndarray, q: np.ndarray, limit_sq: float) -> np.ndarray:
    return p @ q.T > 1.0 - limit_sq / 2.0


def graph_from_points(x: np.ndarray, y: np.ndarray, mu: float) -> BitGraph:
    """Apply the three distance rules to point arrays ``x`` (side X) and ``y`` (side Y)."""
    m = len(x)
    if len(y) != m:
        raise InputError("both sides need the same number of points")
    n = 2 * m
    cross_sq = (SQRT2 - mu) ** 2
    side_sq = (2.0 - mu) ** 2

    def side(points):
        adj = np.zeros((m, m), dtype=bool)
        for lo in range(0, m, _BLOCK):
            hi = min(lo + _BLOCK, m)
            adj[lo:hi, lo:] = _side_block(points[lo:hi], points[lo:], side_sq)
        # each pair decided once, from its upper-triangle evaluation
        adj = np.triu(adj, 1)
        return adj | adj.T

    sx, sy = side(x), side(y)
    words = np.zeros((n, (n + 63) // 64), dtype=np.uint64)
    cross = np.zeros((m, m), dtype=bool)
    for lo in range(0, m, _BLOCK):
        hi = min(lo + _BLOCK, m)
        cross[lo:hi] = _cross_block(x[lo:hi], y, cross_sq)
    for lo in range(0, m, _BLOCK):
        hi = min(lo + _BLOCK, m)
        words[lo:hi] = pack_rows(np.hstack([sx[lo:hi], cross[lo:hi]]))
        words[m + lo : m + hi] = pack_rows(np.hstack([cross[:, lo:hi].T, sy[lo:hi]]))
    return BitGraph(n, words)


def build_be_graph(params: BEParams) -> NiceGraph:
    """Sample the two point sets and build the geometric graph (deterministic per seed)."""
    m = params.n // 2
    if params.paired:
        xs = sample_sphere_points(params.h, m, params.seed, "construct/paired")
        ys = xs
    else:
        xs = sample_sphere_points(params.h, m, params.seed, "construct/x")
        ys = sample_sphere_points(params.h, m, params.seed, "construct/y")
    g = graph_from_points(xs.points, ys.points, params.mu)
    return NiceGraph(g, halves(params.n), params, (xs, ys))


def verify_nice(g: NiceGraph) -> Certificate:
    """NoWitness when both sides are triangle-free and the graph is K4-free."""
    for side in (g.X, g.Y):
        tri = find_triangle_in(g.graph, side)
        if tri.found:
            return tri
    k4 = find_k4(g.graph)
    return k4 if k4.found else NO_WITNESS


def expected_cross_density(h: int, epsilon: float) -> float:
    """Probability that two independent uniform points are joined across the split."""
    return cap_measure(h, SQRT2 - epsilon / math.sqrt(h))


def be_theoretical_bounds(n: int, h: int, epsilon: float) -> BoundReport:
    """Independence and minimum-degree bounds promised for the construction."""
    if n < 1 or h < 2 or not 0 <= epsilon < 1:
        raise InputError("need n >= 1, h >= 2 and 0 <= epsilon < 1")
    r = BoundReport("be_theoretical_bounds", {"n": n, "h": h, "epsilon": epsilon})
    r.add("independence_bound", "2*n*exp(-epsilon*sqrt(h)/4)", 2 * n * math.exp(-epsilon * math.sqrt(h) / 4))
    r.add("min_degree_bound", "(1/4 - 2*epsilon)*n", (0.25 - 2 * epsilon) * n)
    r.flags["large_n_regime"] = "unknown"
    r.flags["note"] = "the bounds are promised only for n >= (C*sqrt(h)/epsilon)^h with C unspecified"
    return r


def construction_record(g: NiceGraph) -> dict:
    """Params, graph and summary statistics as one JSON-ready object."""
    rec: dict[str, Any] = {}
    if isinstance(g.provenance, BEParams):
        rec["params"] = g.provenance.to_dict()
    rec["graph"] = graph_to_dict(g.graph, g.X)
    summary = g.summary()
    if isinstance(g.provenance, BEParams):
        summary["predicted_cross_density"] = expected_cross_density(g.provenance.h, g.provenance.epsilon)
    rec["summary"] = summary
    return rec


def construction_json(g: NiceGraph) -> str:
    return json.dumps(construction_record(g), separators=(",", ":"))
