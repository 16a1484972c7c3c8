"""Closed-form bounds around the n^2/8 edge threshold for K4-free graphs.

Every value is evaluated with mpmath at 50 significant digits and stored
next to a sympy-parsable formula over the report's inputs, so it can be
recomputed independently.  Unspecified constants (``c``, ``c'`` and the
``o(1)`` terms) are never given numbers; reports carry them as notes.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .errors import InputError
from .report import BoundReport

DPS = 50


def _mp(x) -> mpmath.mpf:
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def largest_self_power(n: int) -> int:
    """Largest integer h >= 1 with h^h <= n."""
    if n < 1:
        raise InputError("n must be positive")
    # h log h <= log n pins h down to within one; finish with exact integer powers
    lo, hi = 1, 2
    while hi**hi <= n:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**mid <= n:
            lo = mid
        else:
            hi = mid
    return lo


def window_summary(n: int, m: int = 0, alpha: int = 0) -> BoundReport:
    """Edge thresholds and independence rates bracketing the critical window."""
    if n < 16:
        raise InputError("n must be at least 16 so that log log n > 0")
    if m < 0 or alpha < 0:
        raise InputError("m and alpha must be non-negative")
    r = BoundReport("window_summary", {"n": n, "m": m, "alpha": alpha})
    with mpmath.workdps(DPS):
        N, M, A = _mp(n), _mp(m), _mp(alpha)
        ln = mpmath.log(N)
        lln = mpmath.log(ln)
        base = N**2 / 8
        r.add("edges_above_lower", "n**2/8 + m*n/3", base + M * N / 3,
              "lower bound minus an unresolved o(1) m n term")
        r.add("edges_above_upper", "n**2/8 + 3*m*n/2", base + 3 * M * N / 2)
        r.add("k4_or_independent_threshold_loose", "n**2/8 + 10**10*alpha*n", base + mpmath.mpf(10) ** 10 * A * N)
        r.add("k4_or_independent_threshold_tight", "n**2/8 + 3*alpha*n/2", base + 3 * A * N / 2,
              "requires alpha below an unspecified constant fraction of n")
        r.add("critical_independence_lower_per_c", "n*log(log(n))/log(n)", N * lln / ln,
              "multiply by the unspecified constant c")
        window = N * lln**1.5 / mpmath.sqrt(ln)
        r.add("critical_independence_upper_per_c_prime", "n*log(log(n))**(3/2)/log(n)**(1/2)", window,
              "multiply by the unspecified constant c'")
        r.flags["m_at_most_n_over_3"] = 3 * m <= n
        r.flags["m_over_window_scale"] = float(M / window)
        r.flags["o1_terms"] = "unresolved"
    return r


def be_window_params(n: int) -> BoundReport:
    """Construction parameters h, epsilon, delta for n vertices and the edge floor they give."""
    if n < 16:
        raise InputError("n must be at least 16 so that log log n > 0")
    h = largest_self_power(n)
    r = BoundReport("be_window_params", {"n": n, "h": h})
    with mpmath.workdps(DPS):
        N = _mp(n)
        ln = mpmath.log(N)
        lln = mpmath.log(ln)
        eps = 4 * lln / mpmath.sqrt(h)
        delta = 4 * lln**1.5 / mpmath.sqrt(ln)
        r.add("epsilon", "4*log(log(n))/sqrt(h)", eps)
        r.add("delta", "4*log(log(n))**(3/2)/sqrt(log(n))", delta)
        r.add("independence_level", "4*n*log(log(n))**(3/2)/sqrt(log(n))", delta * N)
        r.add("edge_floor", "(1/8 - 4*log(log(n))**(3/2)/sqrt(log(n)))*n**2", (mpmath.mpf(1) / 8 - delta) * N**2)
        r.add("be_independence_bound", "2*n*exp(-(4*log(log(n))/sqrt(h))*sqrt(h)/4)", 2 * N * mpmath.exp(-eps * mpmath.sqrt(h) / 4))
        r.flags["epsilon_in_unit_interval"] = bool(0 < eps < 1)
        r.flags["edge_floor_positive"] = bool(delta < mpmath.mpf(1) / 8)
        r.flags["large_n_regime"] = "unknown"
    return r


def assemble_critical_point(n: int) -> BoundReport:
    """Chain the construction parameters into the densification step with d = 2 delta n.

    The result is a K4-free graph with at least n^2/8 edges and
    independence number below 3 delta n, provided n^(-1/2) <= delta <= 1/4.
    """
    if n < 16 or n % 2:
        raise InputError("n must be even and at least 16")
    params = be_window_params(n)
    r = BoundReport("assemble_critical_point", {"n": n})
    with mpmath.workdps(DPS):
        N = _mp(n)
        ln = mpmath.log(N)
        delta = 4 * mpmath.log(ln) ** 1.5 / mpmath.sqrt(ln)
        ok = bool(delta * delta * N >= 1 and delta <= mpmath.mpf(1) / 4)
        r.flags["densify_hypothesis"] = "holds" if ok else "fails: need n^(-1/2) <= delta <= 1/4"
        r.flags["edge_floor_positive"] = params.flags["edge_floor_positive"]
        factor = 1 + 48 * delta**2 - 8 / N - 128 * delta**3
        d = "4*log(log(n))**(3/2)/sqrt(log(n))"
        r.add("delta", d, delta)
        r.add("margin_factor", f"1 + 48*({d})**2 - 8/n - 128*({d})**3", factor if ok else None)
        r.add("edge_count", f"n**2/8*(1 + 48*({d})**2 - 8/n - 128*({d})**3)", N**2 / 8 * factor if ok else None)
        r.add("independence_bound", f"3*n*({d})", 3 * delta * N if ok else None,
              "independence level delta n of the construction plus the layer 2 delta n")
        r.flags["edge_floor_met"] = bool(factor >= 1) if ok else None
    return r


def assemble_above_window(n: int, m: int) -> BoundReport:
    """Lower bound on the edge count with independence number below m, for m <= n/3.

    Uses the construction at independence level m0 = delta n and a layer of
    size a n with a = (m - m0)/n.
    """
    if n < 16 or n % 2:
        raise InputError("n must be even and at least 16")
    if m < 1 or 3 * m > n:
        raise InputError(f"need 1 <= m <= n/3, got m={m}")
    r = BoundReport("assemble_above_window", {"n": n, "m": m})
    d = "4*log(log(n))**(3/2)/sqrt(log(n))"
    with mpmath.workdps(DPS):
        N, M = _mp(n), _mp(m)
        ln = mpmath.log(N)
        delta = 4 * mpmath.log(ln) ** 1.5 / mpmath.sqrt(ln)
        a = (M - delta * N) / N
        ok = bool(a * delta * N >= 1 and a <= mpmath.mpf(1) / 2)
        r.flags["layer_hypothesis"] = "holds" if ok else "fails: need 1/(delta n) <= a <= 1/2"
        r.flags["turan_boundary"] = 3 * m == n
        # a working cutoff for "m much smaller than n"
        r.flags["sublinear_regime"] = 100 * m <= n
        r.flags["leading_constant"] = "1/2" if 100 * m <= n else "1/3"
        r.add("delta", d, delta)
        r.add("a", f"(m - n*({d}))/n", a)
        value = N**2 / 8 * (1 + 4 * a - 4 * a * a - 8 * delta)
        formula = f"n**2/8*(1 + 4*((m - n*({d}))/n) - 4*((m - n*({d}))/n)**2 - 8*({d}))"
        r.add("edge_lower_bound", formula, value if ok else None)
        r.add("excess_over_mn", f"({formula} - n**2/8)/(m*n)", (value - N**2 / 8) / (M * N) if ok else None,
              "compare with the leading constant flag")
    return r


def critical_log_n(target_delta: float = 0.25) -> float:
    """Value of log n at which delta(n) = 4 (log log n)^(3/2) / (log n)^(1/2) falls to ``target_delta``.

    delta decreases in log n once log log n > 3, so the root is unique there.
    """
    with mpmath.workdps(30):
        def f(L):
            return 4 * mpmath.log(L) ** 1.5 / mpmath.sqrt(L) - target_delta

        return float(mpmath.findroot(f, (1e3, 1e8), solver="anderson"))

