import math

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from rtworkbench.bounds import (
    assemble_above_window,
    assemble_critical_point,
    be_window_params,
    critical_log_n,
    largest_self_power,
    window_summary,
)
from rtworkbench.errors import InputError
from rtworkbench.report import BoundReport


def reevaluate(report: BoundReport) -> None:
    """Parse every formula with sympy, substitute exact inputs, compare at 1e-12."""
    subs = {sympy.Symbol(k): sympy.Integer(int(v)) for k, v in report.inputs.items()}
    for e in report.entries:
        if e.value is None:
            continue
        expr = sympy.sympify(e.formula, locals={k: sympy.Symbol(k) for k in ("n", "m", "h", "alpha")})
        ref = mpmath.mpf(str(sympy.N(expr.subs(subs), 40)))
        got = mpmath.mpf(e.value)
        assert abs(got - ref) <= 1e-12 * abs(ref) + 1e-300, (report.title, e.name, got, ref)


def test_largest_self_power():
    assert largest_self_power(10**8) == 8
    assert largest_self_power(256) == 4
    assert largest_self_power(255) == 3
    assert largest_self_power(1) == 1
    for n in (27, 3125, 46656, 10**15):
        h = largest_self_power(n)
        assert h**h <= n < (h + 1) ** (h + 1)


def test_window_summary_examples():
    r = window_summary(10**6, m=10**4)
    assert r["edges_above_upper"] == pytest.approx(10**12 / 8 + 1.5e10, rel=1e-15)
    assert window_summary(10**6, alpha=0)["k4_or_independent_threshold_loose"] == 10**12 / 8
    assert window_summary(10**6, alpha=10**3)["k4_or_independent_threshold_tight"] == pytest.approx(
        10**12 / 8 + 1.5e9, rel=1e-15
    )
    assert r.flags["o1_terms"] == "unresolved"
    assert "o(1)" in r.entry("edges_above_lower").note
    with pytest.raises(InputError):
        window_summary(10)


def test_window_params_examples():
    r = be_window_params(10**8)
    assert r.inputs["h"] == 8
    L = math.log(1e8)
    assert r["delta"] == pytest.approx(4 * math.log(L) ** 1.5 / math.sqrt(L), rel=1e-14)
    assert r["epsilon"] == pytest.approx(4 * math.log(L) / math.sqrt(8), rel=1e-14)
    # at desk n both construction hypotheses are out of range and flagged
    assert r.flags["epsilon_in_unit_interval"] is False
    assert r.flags["edge_floor_positive"] is False
    assert be_window_params(256).inputs["h"] == 4
    with pytest.raises(InputError):
        be_window_params(15)


def test_critical_point_flags():
    small = assemble_critical_point(10**6)
    assert small.flags["densify_hypothesis"].startswith("fails")
    assert small["edge_count"] is None and small["independence_bound"] is None
    # 10^12 is still far below the point where delta reaches 1/4
    r12 = assemble_critical_point(10**12)
    assert r12["delta"] > 4
    assert r12.flags["densify_hypothesis"].startswith("fails")


def test_critical_point_past_threshold():
    L = critical_log_n()
    assert 4 * math.log(L) ** 1.5 / math.sqrt(L) == pytest.approx(0.25, rel=1e-12)
    n = 10 ** (int(L / math.log(10)) + 10)
    n += n % 2
    r = assemble_critical_point(n)
    assert r.flags["densify_hypothesis"] == "holds"
    assert r.flags["edge_floor_met"] is True
    d = mpmath.mpf(r["delta"])
    assert abs(mpmath.mpf(r["independence_bound"]) / (3 * d * n) - 1) < 1e-12
    reevaluate(r)


def test_above_window():
    with pytest.raises(InputError):
        assemble_above_window(300, 101)
    with pytest.raises(InputError):
        assemble_above_window(300, 0)
    r = assemble_above_window(3 * 10**8, 10**8)
    assert r.flags["turan_boundary"] is True
    assert r.flags["leading_constant"] == "1/3"
    # delta is too large at n = 10^8 for the layer hypothesis; no value is emitted
    r8 = assemble_above_window(10**8, 10**7)
    assert r8.flags["layer_hypothesis"].startswith("fails")
    assert r8["edge_lower_bound"] is None
    small_m = assemble_above_window(10**8, 10**5)
    assert small_m.flags["sublinear_regime"] is True and small_m.flags["leading_constant"] == "1/2"


def test_above_window_huge_n():
    n = 3 * 10**270000
    r = assemble_above_window(n, n // 3)
    assert r.flags["layer_hypothesis"] == "holds"
    assert isinstance(r["edge_lower_bound"], str)
    reevaluate(r)


@pytest.mark.parametrize("n", [16, 1000, 10**6, 10**12, 10**15])
def test_reevaluation_window(n):
    reevaluate(window_summary(n, m=n // 7, alpha=n // 11))
    reevaluate(be_window_params(n))
    if n % 2 == 0:
        reevaluate(assemble_critical_point(n))
        reevaluate(assemble_above_window(n, max(1, n // 5)))


@given(st.integers(16, 10**15), st.integers(0, 10**6), st.integers(0, 10**6))
@settings(max_examples=80, deadline=None)
def test_reevaluation_property(n, m, alpha):
    reevaluate(window_summary(n, m, alpha))


@given(st.integers(16, 10**15), st.integers(0, 10**9), st.integers(0, 10**9))
@settings(max_examples=80, deadline=None)
def test_lower_bound_monotone_in_m(n, m1, m2):
    lo, hi = sorted((m1, m2))
    assert window_summary(n, lo)["edges_above_lower"] <= window_summary(n, hi)["edges_above_lower"]


def test_no_value_when_hypothesis_fails():
    for n in (16, 1000, 10**9, 10**15):
        r = assemble_critical_point(n)
        if r.flags["densify_hypothesis"] != "holds":
            assert all(r[k] is None for k in ("margin_factor", "edge_count", "independence_bound"))


def test_report_serialization():
    r = window_summary(10**6, 10**4)
    d = r.to_dict()
    assert d["inputs"] == {"n": 10**6, "m": 10**4, "alpha": 0}
    assert len(r.to_csv().splitlines()) == len(r.entries) + 1
    big = assemble_above_window(3 * 10**270000, 10**270000)
    assert big.to_dict()["inputs"]["n"] == "3.0e+270000"
    assert window_summary(2**60).to_dict()["inputs"]["n"] == str(2**60)
