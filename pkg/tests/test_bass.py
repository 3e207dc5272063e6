from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from weighted_zeta import build_bass, fixture, fredholm_coeffs, random_graph, trace_power
from weighted_zeta.bass import apply, from_matrix, power_traces
from weighted_zeta.cycles import closed_paths
from weighted_zeta.errors import InvalidGraphError
from weighted_zeta.graph import OrientedEdge, WeightedGraph


def test_bass_matrix_layout():
    T = build_bass(fixture("G2", 2, 3))
    # column e holds the successors of e
    assert np.array_equal(T.dense(), np.array([[0, 3], [2, 0]]))


def test_apply_maps_edge_to_weighted_successors():
    T = build_bass(fixture("G3"))
    v = np.zeros(5)
    v[0] = 1
    assert np.array_equal(apply(T, v), [0, 1, 1, 0, 0])


def test_build_rejects_invalid_graph():
    g = WeightedGraph(("a", "b"), (OrientedEdge(0, "a", "b"), OrientedEdge(1, "a", "b")),
                      {(0, 1): 1})
    with pytest.raises(InvalidGraphError):
        build_bass(g)


def test_trace_power_rejects_zero():
    with pytest.raises(ValueError):
        trace_power(build_bass(fixture("G3")), 0)


def test_g3_traces_closed_form():
    T = build_bass(fixture("G3"))
    for m in range(1, 13):
        expected = 3 * 2 ** (m // 3) if m % 3 == 0 else 0
        assert trace_power(T, m, exact=True) == expected


def test_g1_traces():
    T = build_bass(fixture("G1", Fraction(1, 2)))
    assert power_traces(T, 4, exact=True) == [Fraction(1, 2 ** k) for k in range(1, 5)]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5000), st.integers(1, 7))
def test_trace_matches_naive_closed_path_sum(seed, m):
    # every closed path of length m counted once per starting edge
    g = random_graph(seed, max_edges=8)
    naive = sum((p.weight for p in closed_paths(g, m, exact=True)), Fraction(0))
    assert trace_power(build_bass(g), m, exact=True) == naive


def _sympy_reversed_charpoly(M):
    n = M.shape[0]
    S = sympy.Matrix(n, n, lambda i, j: sympy.Rational(str(M[i, j])))
    u = sympy.Symbol("u")
    p = sympy.Poly((sympy.eye(n) - u * S).det(), u)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]
    return coeffs + [Fraction(0)] * (n + 1 - len(coeffs))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5000))
def test_fredholm_matches_sympy_determinant(seed):
    g = random_graph(seed, max_edges=7)
    T = build_bass(g)
    ours = fredholm_coeffs(T, exact=True)
    ref = _sympy_reversed_charpoly(T.exact)
    n = max(len(ours), len(ref))
    ours = list(ours) + [0] * (n - len(ours))
    ref = ref + [0] * (n - len(ref))
    assert ours == ref


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5000))
def test_float_fredholm_close_to_numpy_poly(seed):
    g = random_graph(seed)
    T = build_bass(g)
    ours = np.array(fredholm_coeffs(T), dtype=float)
    # np.poly gives det(xI - A); reversing gives det(I - uA)
    ref = np.poly(T.dense())
    assert len(ours) >= 1 and ours[0] == 1
    assert np.allclose(ours[: len(ref)], ref, atol=1e-8 * (1 + np.abs(ref).max()))
    assert np.allclose(ours[len(ref):], 0, atol=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 5000))
def test_traces_are_nonnegative(seed):
    T = build_bass(random_graph(seed))
    assert all(t >= 0 for t in power_traces(T, 8, exact=True))


def test_fredholm_degree_bounded_by_dimension():
    T = build_bass(fixture("G4"))
    c = fredholm_coeffs(T, deg=10, exact=True)
    assert all(x == 0 for x in c[T.dim + 1:])


def test_from_matrix_round_trip():
    M = np.array([[0.0, 1.5], [2.0, 0.25]])
    T = from_matrix(M)
    assert np.array_equal(T.dense(), M)
    assert fredholm_coeffs(T, exact=True) == [1, Fraction(-1, 4), -3]
