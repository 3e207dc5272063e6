from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weighted_zeta import (
    asymptotic_check,
    double_cycle_criterion,
    fixture,
    pgt_fit,
    pgt_parameters,
    random_graph,
)
from weighted_zeta.errors import DegenerateRadiusError, HypothesisError
from weighted_zeta.graph import OrientedEdge, WeightedGraph


def test_g3_parameters_exact():
    p = pgt_parameters(fixture("G3"), exact=True)
    assert p.r == pytest.approx(2 ** (1 / 3), rel=1e-12)
    assert (p.s, p.periods, p.K) == (1, [3], 3)
    assert p.exact_powers == {3: 2}
    assert p.exact_C() == 6
    assert p.eps_gap == pytest.approx(p.r)  # every other eigenvalue is zero


def test_g2_period_two():
    p = pgt_parameters(fixture("G2", 2, 3), exact=True)
    assert p.periods == [2] and p.exact_powers == {2: 6}
    assert p.exact_C() == Fraction(12, 5)


def test_g4_sub_radius_block_excluded():
    p = pgt_parameters(fixture("G4"))
    assert p.s == 1 and p.periods == [3]
    assert p.eps_gap == pytest.approx(2 ** (1 / 3) - 1)


def test_irrational_radius_falls_back_to_float():
    # two loops at one node with transition matrix [[1, 1], [1, 0]]: r is the golden ratio
    g = WeightedGraph(("v",), (OrientedEdge(0, "v", "v"), OrientedEdge(1, "v", "v")),
                      {(0, 0): 1, (0, 1): 1, (1, 0): 1})
    p = pgt_parameters(g, exact=True)
    assert p.r == pytest.approx((1 + 5 ** 0.5) / 2)
    assert p.exact_powers == {}
    fit = pgt_fit(g, 12, exact=True)
    assert not fit.exact and fit.passed


def test_zero_radius_raises():
    with pytest.raises(DegenerateRadiusError):
        pgt_parameters(fixture("G1", 0))


def test_g3_fit_exact_zero_residual():
    fit = pgt_fit(fixture("G3"), 15, exact=True)
    assert fit.exact and fit.passed
    assert all(x == 0 for x in fit.residuals)


def test_g4_fit_residual_is_one():
    fit = pgt_fit(fixture("G4"), 9, exact=True)
    assert list(fit.residuals) == [1] * 9
    assert fit.passed


def test_g4_fit_float_mode():
    fit = pgt_fit(fixture("G4"), 12)
    assert fit.passed
    assert max(abs(x - 1) for x in fit.residuals) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_fit_residuals_match_definition(seed):
    g = random_graph(seed)
    try:
        fit = pgt_fit(g, 10)
    except DegenerateRadiusError:
        return
    p = fit.params
    for m, (n_m, res) in enumerate(zip(fit.N, fit.residuals), start=1):
        lead = sum(n for n in p.periods if m % n == 0) * p.r ** m
        assert res == pytest.approx(n_m - lead, abs=1e-9 * (1 + abs(n_m)))


def test_g3_psi_closed_form():
    table = asymptotic_check(fixture("G3"), 15, exact=True)
    assert table.C == 6
    for row in table.rows:
        assert row.psi_ratio == 6 - Fraction(6, 2 ** row.n)
    assert table.psi_within_band


def test_g4_psi_within_band_but_not_monotone():
    table = asymptotic_check(fixture("G4"), 15, exact=True)
    assert table.psi_within_band
    assert not table.monotone["psi_ratio"]


def test_asymptotics_need_radius_above_one():
    with pytest.raises(HypothesisError):
        asymptotic_check(fixture("G2", 1, 1), 6)


def test_double_cycle_g3():
    rep = double_cycle_criterion(fixture("G3"), 6)
    assert rep.witness == ((0, 1, 3), (0, 2, 4))
    assert rep.shared_edge == 0 and rep.length == 3
    assert rep.bound_holds
    assert [v for _, v, _ in rep.diagonal_growth] == [2, 4, 8, 16, 32]
    assert rep.g3_identity


def test_double_cycle_absent_on_single_cycle():
    rep = double_cycle_criterion(fixture("G2", 1, 1), 8)
    assert rep.witness is None and rep.bound_holds is None


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_double_cycle_bound_on_random_graphs(seed):
    rep = double_cycle_criterion(random_graph(seed, max_edges=8), 6)
    if rep.witness is not None:
        assert rep.bound_holds
        assert all(ok for _, _, ok in rep.diagonal_growth)
