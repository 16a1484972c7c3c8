"""Brute-force oracles shared by the test modules.

These deliberately avoid the package's bitset code: plain itertools over
a dense numpy adjacency matrix.
"""

from itertools import combinations

import numpy as np
from hypothesis import strategies as st

from rtworkbench.graph import from_dense


def brute_alpha(adj: np.ndarray) -> int:
    n = len(adj)
    best = 0
    # enumerate all subsets by bitmask; fine for n <= 18
    nbr = [sum(1 << j for j in range(n) if adj[i, j]) for i in range(n)]
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        ok = True
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            if nbr[v] & mask:
                ok = False
                break
            m &= m - 1
        if ok:
            best = size
    return best


def brute_cliques(adj: np.ndarray, k: int, within=None) -> list[tuple[int, ...]]:
    verts = range(len(adj)) if within is None else sorted(within)
    return [c for c in combinations(verts, k) if all(adj[a, b] for a, b in combinations(c, 2))]


def brute_odd_girth(adj: np.ndarray) -> float:
    # shortest odd closed walk equals the odd girth: first odd L with tr(A^L) > 0
    a = adj.astype(object)
    n = len(adj)
    power = a.copy()
    for length in range(1, n + 2):
        if length % 2 == 1 and length >= 3 and sum(power[i, i] for i in range(n)) > 0:
            return length
        power = power.dot(a)
    return float("inf")


def dense_random(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    upper = np.triu(rng.random((n, n)) < p, 1)
    return upper | upper.T


@st.composite
def small_graphs(draw, min_n=0, max_n=14):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    adj = np.zeros((n, n), dtype=bool)
    iu = np.triu_indices(n, 1)
    adj[iu] = bits
    adj |= adj.T
    return from_dense(adj)


# acceptance criteria append "PASS/FAIL" lines here; printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
