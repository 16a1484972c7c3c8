import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_cliques
from rtworkbench.certify import Kind
from rtworkbench.construct import (
    MU_LIMIT,
    BEParams,
    NiceGraph,
    be_theoretical_bounds,
    build_be_graph,
    construction_json,
    construction_record,
    expected_cross_density,
    graph_from_points,
    halves,
    verify_nice,
)
from rtworkbench.errors import InputError
from rtworkbench.geometry import SQRT2, cap_measure
from rtworkbench.graph import build_graph, density_between, graph_from_dict


def brute_rules(x: np.ndarray, y: np.ndarray, mu: float) -> np.ndarray:
    # the three distance rules applied literally with Euclidean norms
    pts = np.vstack([x, y])
    m = len(x)
    n = 2 * m
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            d = np.linalg.norm(pts[i] - pts[j])
            same = (i < m) == (j < m)
            adj[i, j] = adj[j, i] = d > 2 - mu if same else d < SQRT2 - mu
    return adj


def test_params_validation():
    with pytest.raises(InputError):
        BEParams(201, 16, 0.3)
    with pytest.raises(InputError):
        BEParams(200, 1, 0.3)
    with pytest.raises(InputError):
        BEParams(200, 16, 1.0)
    with pytest.raises(InputError):
        BEParams(200, 16, 0.0)
    with pytest.raises(InputError):
        BEParams(200, 2, 0.99, seed=-1)
    # mu beyond 2 - sqrt(3) is rejected: sides could carry triangles
    with pytest.raises(InputError):
        BEParams(200, 2, 0.5)
    assert BEParams(200, 16, 0.4).mu == pytest.approx(0.1)


def test_threshold_identities():
    # three unit vectors have squared pairwise distances summing to at most 9,
    # so all three beyond (2 - mu) is impossible while 3 (2 - mu)^2 > 9
    for mu in np.linspace(1e-6, MU_LIMIT - 1e-9, 200):
        assert 9 - 3 * (2 - mu) ** 2 < 0
        # K4 computation: two cross pairs close, two side pairs far
        assert 4 * (SQRT2 - mu) ** 2 - 2 * (2 - mu) ** 2 < 0
    assert 9 - 3 * (2 - MU_LIMIT) ** 2 == pytest.approx(0, abs=1e-12)


def test_hand_placed_points():
    mu = 0.1
    e = np.eye(3)
    # antipodal X pair gives a side edge
    g = graph_from_points(np.array([e[0], -e[0]]), np.array([e[1], e[2]]), mu)
    assert g.has_edge(0, 1)
    # coincident x, y gives a cross edge; orthogonal does not
    assert g.has_edge(0, 2) is False
    g2 = graph_from_points(np.array([e[0], e[1]]), np.array([e[0], e[2]]), mu)
    assert g2.has_edge(0, 2)
    assert not g2.has_edge(0, 3)
    assert not g2.has_edge(1, 3)


@given(st.integers(2, 12), st.integers(1, 20), st.floats(0.01, 0.99), st.integers(0, 10**6))
@settings(max_examples=60, deadline=None)
def test_matches_literal_distance_rules(h, m, eps, seed):
    mu = eps / math.sqrt(h)
    if mu >= MU_LIMIT:
        return
    p = BEParams(2 * m, h, eps, seed)
    nice = build_be_graph(p)
    xs, ys = nice.points
    adj = brute_rules(xs.points, ys.points, mu)
    # pairs sitting within rounding of a threshold may go either way
    pts = np.vstack([xs.points, ys.points])
    dist = np.linalg.norm(pts[:, None] - pts[None], axis=2)
    same = np.add.outer(np.arange(2 * m) < m, np.arange(2 * m) < m) != 1
    limit = np.where(same, 2 - mu, SQRT2 - mu)
    clear = np.abs(dist - limit) > 1e-12
    assert np.array_equal(nice.graph.dense[clear], adj[clear])


@given(st.integers(2, 40), st.integers(2, 30), st.floats(0.01, 0.99), st.integers(0, 10**6), st.booleans())
@settings(max_examples=80, deadline=None)
def test_always_nice(h, m, eps, seed, paired):
    if eps / math.sqrt(h) >= MU_LIMIT:
        return
    nice = build_be_graph(BEParams(2 * m, h, eps, seed, paired))
    assert not verify_nice(nice).found
    adj = nice.graph.dense
    assert not brute_cliques(adj, 3, range(m))
    assert not brute_cliques(adj, 3, range(m, 2 * m))


def test_deterministic_and_seeded():
    a = build_be_graph(BEParams(300, 8, 0.3, 5))
    b = build_be_graph(BEParams(300, 8, 0.3, 5))
    c = build_be_graph(BEParams(300, 8, 0.3, 6))
    assert a.graph == b.graph and a.graph != c.graph
    assert construction_json(a) == construction_json(b)


def test_paired_mode_shares_points():
    nice = build_be_graph(BEParams(100, 8, 0.3, 1, paired=True))
    xs, ys = nice.points
    assert np.array_equal(xs.points, ys.points)
    # x_i = y_i so every x_i is joined to its twin
    assert all(nice.graph.has_edge(i, 50 + i) for i in range(50))
    # and the two sides induce the same graph
    d = nice.graph.dense
    assert np.array_equal(d[:50, :50], d[50:, 50:])


def test_cross_density_matches_cap_measure():
    h, eps = 16, 0.3
    pred = expected_cross_density(h, eps)
    assert pred == cap_measure(h, SQRT2 - eps / 4)
    dens = []
    for seed in range(20):
        nice = build_be_graph(BEParams(400, h, eps, seed))
        dens.append(float(density_between(nice.graph, nice.X, nice.Y)))
    se = np.std(dens, ddof=1) / math.sqrt(len(dens))
    assert abs(np.mean(dens) - pred) <= 5 * se


def test_verify_nice_planted():
    tri = NiceGraph(build_graph(6, [(0, 1), (1, 2), (0, 2)]), halves(6))
    cert = verify_nice(tri)
    assert cert.kind is Kind.TRIANGLE_IN_SIDE and cert.vertices == (0, 1, 2)
    k4 = NiceGraph(build_graph(6, [(0, 1), (3, 4), (0, 3), (0, 4), (1, 3), (1, 4)]), halves(6))
    cert = verify_nice(k4)
    assert cert.kind is Kind.K4 and cert.vertices == (0, 1, 3, 4)


def test_nice_graph_rejects_unbalanced_split():
    from rtworkbench.graph import Bipartition

    with pytest.raises(InputError):
        NiceGraph(build_graph(6, []), Bipartition.from_left(6, [0, 1]))


def test_theoretical_bounds_examples():
    r = be_theoretical_bounds(10**4, 16, 0.5)
    assert r["independence_bound"] == pytest.approx(2e4 * math.exp(-0.5), rel=1e-15)
    assert r["independence_bound"] == pytest.approx(12130.6, abs=0.05)
    assert be_theoretical_bounds(10**4, 16, 0.0)["min_degree_bound"] == 2500
    assert be_theoretical_bounds(10**4, 16, 0.125)["min_degree_bound"] == 0
    assert r.flags["large_n_regime"] == "unknown"


def test_construction_record_round_trip():
    nice = build_be_graph(BEParams(60, 8, 0.4, 2))
    rec = json.loads(construction_json(nice))
    assert rec["params"]["n"] == 60 and rec["params"]["mu"] == pytest.approx(0.4 / math.sqrt(8))
    g, left = graph_from_dict(rec["graph"])
    assert g == nice.graph and left == nice.X
    s = rec["summary"]
    assert s["e"] == nice.graph.num_edges and s["min_degree"] == nice.graph.min_degree()
    assert s["predicted_cross_density"] == expected_cross_density(8, 0.4)
    assert construction_record(nice)["summary"] == s
