"""Dependent random choice with a majority threshold, plus binomial tail checks.

A round samples a multiset ``T`` of ``t`` vertices of ``B`` and keeps the
vertices of ``A`` adjacent to at least ``(1/2 + eps) t`` of them.  Pairs with
few common ``B``-neighbors are pruned; an edge among the survivors then
leads to a K4 or a large independent set inside a common neighborhood.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath
import numpy as np

from .certify import Certificate, Kind, drill_common, local_max_cut, peel_min_degree
from .errors import InputError
from .graph import BitGraph, VertexSet, as_fraction, as_mask, induced_subgraph, iter_bits
from .rng import stream


@dataclass(frozen=True)
class DRCParams:
    t: int
    epsilon: float
    gamma: float
    C: float = 1.0
    seed: int = 0
    K: float = field(init=False)

    def __post_init__(self):
        if self.t < 1:
            raise InputError("sample size t must be at least 1")
        if not 0 < self.epsilon < 0.5:
            raise InputError("epsilon must lie in (0, 1/2)")
        if self.gamma <= 0:
            raise InputError("gamma must be positive")
        if self.seed < 0:
            raise InputError("seed must be non-negative")
        object.__setattr__(self, "K", 4 * self.C**2 + 20 * self.C + 16)


@dataclass(frozen=True)
class DRCOutcome:
    kind: str  # "IndependentSet", "K4" or "Fail"
    witness: tuple[int, ...]
    stats: dict[str, Any]

    def validate(self, g: BitGraph) -> bool:
        if self.kind == "Fail":
            return True
        kind = Kind.K4 if self.kind == "K4" else Kind.INDEPENDENT_SET
        return Certificate(kind, self.witness).validate(g)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "witness": list(self.witness), "stats": self.stats}


def drc_round(g: BitGraph, A, B, p: DRCParams) -> DRCOutcome:
    n = g.n
    am, bm = as_mask(n, A), as_mask(n, B)
    if am & bm:
        raise InputError("A and B overlap")
    if not am or not bm:
        raise InputError("A and B must be nonempty")
    a_idx = np.array(list(iter_bits(am)), dtype=np.int64)
    b_idx = np.array(list(iter_bits(bm)), dtype=np.int64)
    rng = stream(p.seed, "drc")
    sample = b_idx[rng.integers(0, len(b_idx), size=p.t)]
    weight = np.bincount(sample, minlength=n).astype(np.int64)
    dense = g.dense
    hits = dense[a_idx].astype(np.int64) @ weight
    need = (Fraction(1, 2) + as_fraction(p.epsilon)) * p.t
    u0 = a_idx[[h >= need for h in hits.tolist()]]

    # common B-neighborhoods of all kept pairs; counts stay exact in float32 below 2^24
    nb = dense[np.ix_(u0, b_idx)].astype(np.float32)
    common = (nb @ nb.T).astype(np.int64)
    low = common <= math.floor(as_fraction(p.epsilon) * len(b_idx))
    alive = np.ones(len(u0), dtype=bool)
    for i in range(len(u0)):
        if alive[i]:
            drop = low[i].copy()
            drop[: i + 1] = False
            alive &= ~drop
    u = u0[alive]
    stats = {
        "T": sample.tolist(),
        "U0_size": int(len(u0)),
        "pruned": int(len(u0) - len(u)),
        "U_size": int(len(u)),
    }
    um = 0
    for v in u.tolist():
        um |= 1 << v
    rows = g.rows
    for x in u.tolist():
        nbrs = rows[x] & um & ~((2 << x) - 1)
        if nbrs:
            y = (nbrs & -nbrs).bit_length() - 1
            cert = drill_common(g, x, y, rows[x] & rows[y] & bm)
            stats["edge"] = [x, y]
            return DRCOutcome(cert.kind.value, cert.vertices, stats)
    if len(u) > as_fraction(p.gamma) * n:
        return DRCOutcome("IndependentSet", tuple(u.tolist()), stats)
    return DRCOutcome("Fail", (), stats)


@dataclass(frozen=True)
class HalfDensityPair:
    found: bool
    A: VertexSet
    B: VertexSet
    floor: Fraction
    stats: dict[str, Any]


def find_half_density_pair(g: BitGraph, gamma, seed: int = 0) -> HalfDensityPair:
    """Peel to high minimum degree, cut locally optimally, keep well-connected vertices.

    ``A`` is the larger cut side restricted to vertices whose degree into
    the other side ``B`` is at least ``(1/2 - 20000 gamma)|B|``.  The pair is
    accepted when ``|A| >= n/16`` and ``|B| >= n/10``.
    """
    n = g.n
    e = g.num_edges
    if 8 * e < n * n:
        raise InputError(f"need at least n^2/8 = {n * n / 8} edges, got {e}")
    gamma = as_fraction(gamma)
    peeled = peel_min_degree(g, e, n)
    sub, labels = induced_subgraph(g, peeled.surviving)
    cut = local_max_cut(sub, seed)
    left = [labels[v] for v in cut.cut.left]
    right = [labels[v] for v in cut.cut.right]
    if len(right) > len(left):
        left, right = right, left
    rm = as_mask(n, right)
    floor = (Fraction(1, 2) - 20000 * gamma) * len(right)
    keep = [v for v in left if (g.rows[v] & rm).bit_count() >= floor]
    A, B = VertexSet.of(n, keep), VertexSet.of(n, right)
    found = 16 * len(A) >= n and 10 * len(B) >= n
    stats = {"survivors": peeled.n_prime, "L_size": len(left), "A_size": len(A), "B_size": len(B)}
    return HalfDensityPair(found, A, B, floor, stats)


# -- binomial tails ------------------------------------------------------------


def _logsumexp(x: np.ndarray) -> float:
    top = float(x.max())
    return top + math.log(float(np.exp(x - top).sum()))


def _log_pmf_run(n: int, p: float, start: int, stop: int) -> np.ndarray:
    """log P[Bin(n,p) = i] for i from ``start`` stepping toward ``stop`` (inclusive)."""
    anchor = math.log(math.comb(n, start)) + start * math.log(p) + (n - start) * math.log1p(-p)
    step = 1 if stop >= start else -1
    i = np.arange(start, stop, step, dtype=np.float64)
    if step == 1:
        ratio = np.log((n - i) / (i + 1)) + math.log(p) - math.log1p(-p)
    else:
        ratio = np.log(i / (n - i + 1)) - math.log(p) + math.log1p(-p)
    return anchor + np.concatenate([[0.0], np.cumsum(ratio)])


def log_binomial_tail(n: int, p: float, m: int) -> float:
    """log P[Bin(n, p) >= m], summed in log space from the side where terms decrease."""
    if n < 0:
        raise InputError("n must be non-negative")
    if not 0.0 <= p <= 1.0:
        raise InputError("p must lie in [0, 1]")
    if m <= 0:
        return 0.0
    if m > n or p == 0.0:
        return -math.inf
    if p == 1.0:
        return 0.0
    if m >= n * p:
        terms = _log_pmf_run(n, p, m, n)
        return _logsumexp(terms)
    lower = _logsumexp(_log_pmf_run(n, p, m - 1, 0))
    return math.log1p(-math.exp(lower)) if lower < 0.0 else -math.inf


def dispersion_probability(n: int, p: float, m: int) -> float:
    """P[Bin(n, p) >= m]."""
    return math.exp(log_binomial_tail(n, p, m))


@dataclass(frozen=True)
class TailCheck:
    log_lhs: float
    log_rhs: float
    holds: bool
    m: int


def check_dispersion(C, epsilon, n: int) -> TailCheck:
    """Compare P[Bin(n, 1/2 - C eps) >= (1/2 + eps) n] with (eps sqrt(n)/2) exp(-n eps^2 K).

    Both sides are reported as logarithms since they underflow doubles.
    """
    Cf, ef = as_fraction(C), as_fraction(epsilon)
    p = Fraction(1, 2) - Cf * ef
    if p <= 0:
        raise InputError("1/2 - C epsilon must be positive")
    if ef <= 0 or n < 1:
        raise InputError("need epsilon > 0 and n >= 1")
    m = math.ceil((Fraction(1, 2) + ef) * n)
    log_lhs = log_binomial_tail(n, float(p), m)
    K = 4 * Cf * Cf + 20 * Cf + 16
    log_rhs = math.log(float(ef) * math.sqrt(n) / 2) - float(n * ef * ef * K)
    return TailCheck(log_lhs, log_rhs, log_lhs > log_rhs, m)


def chernoff_prune_bound(t: int, epsilon) -> float:
    """exp(-t eps / 3), an upper bound on P[Bin(t, eps) >= 2 eps t]."""
    if t < 1:
        raise InputError("t must be at least 1")
    if not 0 < epsilon < 0.5:
        raise InputError("epsilon must lie in (0, 1/2)")
    return math.exp(-t * float(epsilon) / 3)


def exact_binomial_tail(t: int, p: Fraction, m: int) -> Fraction:
    """P[Bin(t, p) >= m] as an exact rational."""
    p = as_fraction(p)
    a, b = p.numerator, p.denominator
    total = sum(math.comb(t, i) * a**i * (b - a) ** (t - i) for i in range(max(m, 0), t + 1))
    return Fraction(total, b**t)


@dataclass(frozen=True)
class ChernoffCheck:
    exact: Fraction
    bound: float
    holds: bool
    m: int


def check_chernoff(t: int, epsilon) -> ChernoffCheck:
    """Exact tail P[Bin(t, eps) >= 2 eps t] against exp(-t eps / 3), compared at 60 digits."""
    bound = chernoff_prune_bound(t, epsilon)
    e = as_fraction(epsilon)
    m = math.ceil(2 * e * t)
    exact = exact_binomial_tail(t, e, m)
    with mpmath.workdps(60):
        lhs = mpmath.mpf(exact.numerator) / exact.denominator
        rhs = mpmath.exp(-t * mpmath.mpf(e.numerator) / e.denominator / 3)
        holds = bool(lhs <= rhs)
    return ChernoffCheck(exact, bound, holds, m)
