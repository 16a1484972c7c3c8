import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_alpha, brute_cliques, brute_odd_girth, dense_random, small_graphs
from rtworkbench.certify import (
    NO_WITNESS,
    BudgetExceeded,
    Certificate,
    Kind,
    MISResult,
    chain_gamma,
    check_codegree_bound,
    check_intersection_chain,
    check_L_triangle,
    check_pair_density,
    clique_cover_bound,
    cut_crossing,
    exact_mis,
    find_k4,
    find_triangle_in,
    is_locally_optimal,
    local_max_cut,
    mis_bounds,
    odd_girth,
    peel_min_degree,
    shearer_bound,
)
from rtworkbench.errors import InputError
from rtworkbench.graph import (
    Bipartition,
    build_graph,
    complete_bipartite,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    empty_graph,
    from_dense,
    petersen_graph,
    random_graph,
    turan_graph,
)


# -- cliques ----------------------------------------------------------------------


@given(small_graphs(max_n=14))
@settings(max_examples=150, deadline=None)
def test_k4_matches_brute_force(g):
    quads = brute_cliques(g.dense, 4)
    cert = find_k4(g)
    if quads:
        assert cert.kind is Kind.K4
        assert cert.vertices == min(quads)
        assert cert.validate(g)
    else:
        assert cert == NO_WITNESS


def test_k4_across_word_boundaries():
    g = build_graph(200, [(a, b) for a, b in combinations((3, 70, 130, 199), 2)])
    assert find_k4(g).vertices == (3, 70, 130, 199)
    assert not find_k4(complete_multipartite([50, 50, 50])).found
    assert find_k4(complete_multipartite([5, 5, 5, 5])).vertices == (0, 5, 10, 15)


@given(small_graphs(max_n=14), st.data())
@settings(max_examples=150, deadline=None)
def test_triangle_in_side_matches_brute_force(g, data):
    side = data.draw(st.sets(st.integers(0, max(g.n - 1, 0)), max_size=g.n)) if g.n else set()
    tris = brute_cliques(g.dense, 3, side)
    cert = find_triangle_in(g, side)
    if tris:
        assert cert.vertices == min(tris)
        assert cert.validate(g, side)
    else:
        assert not cert.found


def test_certificate_validation_rejects_fakes():
    g = cycle_graph(5)
    assert not Certificate(Kind.K4, (0, 1, 2, 3)).validate(g)
    assert not Certificate(Kind.INDEPENDENT_SET, (0, 1)).validate(g)
    assert Certificate(Kind.INDEPENDENT_SET, (0, 2)).validate(g)
    assert not Certificate(Kind.INDEPENDENT_SET, (0, 0)).validate(g)
    tri = Certificate(Kind.TRIANGLE_IN_SIDE, (0, 1, 2))
    assert not tri.validate(complete_graph(5), side=[0, 1])
    assert tri.validate(complete_graph(5), side=[0, 1, 2])


def test_certificate_json():
    c = Certificate(Kind.K4, (0, 1, 2, 3), {"edge": [0, 1]})
    assert c.to_json() == '{"kind":"K4","vertices":[0,1,2,3],"context":{"edge":[0,1]}}'


# -- independent sets ----------------------------------------------------------------


@given(small_graphs(max_n=16))
@settings(max_examples=150, deadline=None)
def test_exact_mis_matches_enumeration(g):
    res = exact_mis(g)
    assert isinstance(res, MISResult)
    assert res.alpha == brute_alpha(g.dense)
    assert len(res.witness) == res.alpha
    assert Certificate(Kind.INDEPENDENT_SET, tuple(res.witness)).validate(g)


@given(small_graphs(max_n=16))
@settings(max_examples=100, deadline=None)
def test_mis_bounds_bracket_alpha(g):
    ind, upper = mis_bounds(g)
    alpha = brute_alpha(g.dense)
    assert Certificate(Kind.INDEPENDENT_SET, tuple(ind)).validate(g)
    assert len(ind) <= alpha <= upper
    assert clique_cover_bound(g) == upper


def test_mis_known_values():
    assert exact_mis(petersen_graph()).alpha == 4
    assert exact_mis(cycle_graph(9)).alpha == 4
    assert exact_mis(complete_bipartite(7, 3)).alpha == 7
    assert exact_mis(turan_graph(30, 3)).alpha == 10
    assert exact_mis(empty_graph(0)).alpha == 0


def test_mis_budget():
    g = random_graph(60, 0.2, 1)
    res = exact_mis(g, budget=5)
    assert isinstance(res, BudgetExceeded)
    assert res.nodes == 5
    assert len(res.witness) == res.lower_bound
    assert Certificate(Kind.INDEPENDENT_SET, tuple(res.witness)).validate(g)


def test_mis_medium_random():
    # brute force at n = 18 still runs in well under a second per graph
    rng = np.random.default_rng(11)
    for _ in range(5):
        adj = dense_random(rng, 18, 0.3)
        assert exact_mis(from_dense(adj)).alpha == brute_alpha(adj)


# -- peeling ---------------------------------------------------------------------------


@given(small_graphs(min_n=2, max_n=20), st.data())
@settings(max_examples=200, deadline=None)
def test_peel_conclusions(g, data):
    if g.num_edges == 0:
        with pytest.raises(InputError):
            peel_min_degree(g, 1)
        return
    n = g.n
    m = data.draw(st.integers(1, g.num_edges))
    res = peel_min_degree(g, m)
    assert res.n_prime * n > 2 * m
    assert res.e_prime * n >= res.n_prime * m
    assert res.min_degree * n >= m
    assert res.threshold == Fraction(m, n)


def test_peel_worked_example():
    # a triangle with a pendant path: the path peels, the triangle survives
    g = build_graph(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)])
    res = peel_min_degree(g, 5)
    assert res.surviving.to_list() == [0, 1, 2]
    assert (res.e_prime, res.min_degree) == (3, 2)


def test_peel_spec_examples():
    k3 = build_graph(4, [(0, 1), (1, 2), (0, 2)])
    res = peel_min_degree(k3, 3)
    assert res.surviving.to_list() == [0, 1, 2] and res.min_degree == 2
    star = build_graph(6, [(0, i) for i in range(1, 6)])
    assert peel_min_degree(star, 5).n_prime == 6
    pet = petersen_graph()
    assert peel_min_degree(pet, 15).surviving.to_list() == list(range(10))


def test_peel_rejects_bad_args():
    g = cycle_graph(6)
    with pytest.raises(InputError):
        peel_min_degree(g, 3, n=7)
    with pytest.raises(InputError):
        peel_min_degree(g, 0)
    with pytest.raises(InputError):
        peel_min_degree(g, 7)


# -- cuts ------------------------------------------------------------------------------


@given(small_graphs(min_n=1, max_n=30), st.integers(0, 1000))
@settings(max_examples=100, deadline=None)
def test_local_max_cut_properties(g, seed):
    res = local_max_cut(g, seed)
    assert res.locally_optimal
    assert is_locally_optimal(g, res.cut)
    assert res.crossing == cut_crossing(g, res.cut)
    # every locally optimal cut keeps at least half the edges
    assert 2 * res.crossing >= g.num_edges


def test_max_cut_start_and_determinism():
    g = random_graph(50, 0.3, 2)
    assert local_max_cut(g, 4).cut.left == local_max_cut(g, 4).cut.left
    k = complete_bipartite(5, 5)
    res = local_max_cut(k, start=Bipartition.from_left(10, range(5)))
    assert res.moves == 0 and res.crossing == 25


# -- codegree, density, L-triangle certifiers ----------------------------------------------


def test_codegree_octahedron():
    octa = complete_multipartite([2, 2, 2])
    cert = check_codegree_bound(octa, 1)
    assert cert.kind is Kind.INDEPENDENT_SET
    assert cert.vertices == (4, 5)
    assert cert.validate(octa)
    assert cert.context["violation"] == "CodegreeViolation"
    assert not check_codegree_bound(octa, 2).found


@given(small_graphs(min_n=2, max_n=14), st.integers(0, 6))
@settings(max_examples=150, deadline=None)
def test_codegree_witness_always_valid(g, alpha):
    cert = check_codegree_bound(g, alpha)
    adj = g.dense
    over = any(adj[u, v] and (adj[u] & adj[v]).sum() > alpha for u, v in combinations(range(g.n), 2))
    assert cert.found == over
    if cert.found:
        assert cert.validate(g)
        if cert.kind is Kind.INDEPENDENT_SET:
            assert len(cert.vertices) > alpha
        else:
            assert cert.kind is Kind.K4


def test_pair_density_dichotomy():
    g = complete_graph(8)
    cert = check_pair_density(g, [0, 1, 2, 3], [4, 5, 6, 7], Fraction(1, 8), 2)
    assert cert.kind is Kind.K4 and cert.validate(g)
    sparse = complete_bipartite(4, 4)
    assert not check_pair_density(sparse, [0, 4], [1, 5], Fraction(1, 8), 4).found
    with pytest.raises(InputError):
        check_pair_density(g, [0, 1], [1, 2], Fraction(1, 8), 4)


@given(small_graphs(min_n=8, max_n=12), st.integers(0, 3))
@settings(max_examples=100, deadline=None)
def test_pair_density_witnesses_valid(g, alpha):
    n = g.n - g.n % 2
    half = n // 2
    x, y = list(range(half)), list(range(half, n))
    cert = check_pair_density(g, x, y, Fraction(1, 20), Fraction(n, half)) if n == g.n else NO_WITNESS
    if cert.found and cert.kind in (Kind.K4, Kind.INDEPENDENT_SET):
        assert cert.validate(g)


def test_l_triangle():
    g = complete_graph(6)
    cert = check_L_triangle(g, [3, 4, 5], 0)
    assert cert.kind is Kind.K4 and cert.validate(g)
    assert not check_L_triangle(complete_bipartite(3, 3), [0, 1, 2], 0).found


@given(small_graphs(min_n=3, max_n=12), st.integers(0, 3), st.data())
@settings(max_examples=100, deadline=None)
def test_l_triangle_witnesses_valid(g, alpha, data):
    L = data.draw(st.sets(st.integers(0, g.n - 1)))
    cert = check_L_triangle(g, L, alpha)
    adj = g.dense
    lmask = np.zeros(g.n, dtype=bool)
    lmask[list(L)] = True
    ld = (adj & lmask).sum(axis=1)
    over = any(ld[a] + ld[b] + ld[c] > len(L) + 3 * alpha for a, b, c in brute_cliques(adj, 3))
    assert cert.found == over
    if cert.kind in (Kind.K4, Kind.INDEPENDENT_SET):
        assert cert.validate(g)
        if cert.kind is Kind.INDEPENDENT_SET:
            assert len(cert.vertices) > alpha


# -- odd girth --------------------------------------------------------------------------


@given(small_graphs(max_n=13))
@settings(max_examples=150, deadline=None)
def test_odd_girth_matches_trace_oracle(g):
    assert odd_girth(g) == brute_odd_girth(g.dense)


def test_odd_girth_known():
    assert odd_girth(petersen_graph()) == 5
    assert odd_girth(cycle_graph(11)) == 11
    assert odd_girth(cycle_graph(10)) == math.inf
    assert odd_girth(complete_graph(4)) == 3


def test_shearer_bound():
    assert shearer_bound(100, math.inf) == 50
    assert shearer_bound(100, 5) == pytest.approx(0.5)
    assert shearer_bound(10_000, 7) == pytest.approx(50.0)
    with pytest.raises(InputError):
        shearer_bound(10, 3)
    # bound is a true lower bound on a long odd cycle
    assert exact_mis(cycle_graph(21)).alpha >= shearer_bound(21, 21)


# -- intersection chain -------------------------------------------------------------------


def test_chain_gamma():
    assert chain_gamma(1, Fraction(1, 1000)) == Fraction(1, 100)
    assert chain_gamma(2, Fraction(1, 10**6)) == Fraction(40030, 10**6)


def test_intersection_chain_on_bipartite_double():
    # X = {0..5} a 6-cycle, Y = {6..11}; x_i sees y_i and y_{i+1}
    n = 12
    edges = [(i, (i + 1) % 6) for i in range(6)]
    edges += [(i, 6 + i) for i in range(6)] + [(i, 6 + (i + 1) % 6) for i in range(6)]
    g = build_graph(n, edges)
    rep = check_intersection_chain(g, range(6), range(6, 12), Fraction(1, 100), [0, 1, 2, 3])
    # consecutive walk vertices share one Y-neighbor; bound 10 gamma |Y| = 0.6
    assert not rep.holds
    assert rep.first_violation.intersection == 1
    with pytest.raises(InputError):
        check_intersection_chain(g, range(6), range(6, 12), Fraction(1, 100), [0, 2])
