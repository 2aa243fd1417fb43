import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasequant.exceptions import DomainError
from phasequant.irrep import IrrepParams, OperatorKind, build_operator, f_coeff, number_state
from phasequant.number_obs import (
    correspondence_report,
    f_squared_minus_four,
    ground_state_moment,
    k1_lower_bound,
    k1_radical,
    k_moments,
    loglog_slope,
    trig_moments,
)

ks = st.floats(0.05, 5.0)


def quad_form(kind, k, n, dim=None):
    """<n|A^2|n> as ||A|n>||^2 from the truncated matrix."""
    dim = dim or n + 3
    p = IrrepParams(k)
    v = number_state(p, n, dim).coeffs
    av = build_operator(kind, p, dim).matvec(v)
    return float(np.vdot(av, av).real), complex(np.vdot(v, av))


@given(ks, st.integers(0, 50))
@settings(max_examples=40)
def test_k_moments_against_matrices(k, n):
    m = k_moments(k, n)
    v1, e1 = quad_form(OperatorKind.K1, k, n)
    v2, e2 = quad_form(OperatorKind.K2, k, n)
    assert m.mean_K1 == 0.0 and abs(e1) < 1e-14 and abs(e2) < 1e-14
    assert m.var_K1 == pytest.approx(v1, rel=1e-13)
    assert m.var_K2 == pytest.approx(v2, rel=1e-13)


@given(ks, st.integers(0, 200))
@settings(max_examples=40)
def test_trig_moments_against_matrices(k, n):
    t = trig_moments(k, n)
    c2, ec = quad_form(OperatorKind.COS_PHI, k, n)
    s2, es = quad_form(OperatorKind.SIN_PHI, k, n)
    assert abs(ec) < 1e-15 and abs(es) < 1e-15
    assert t.second_moment == pytest.approx(c2, rel=1e-13)
    assert t.second_moment == pytest.approx(s2, rel=1e-13)


@pytest.mark.parametrize("k,n", [(0.5, 0), (1.0, 3), (2.2, 10)])
def test_commutator_expectation_against_matrices(k, n):
    p = IrrepParams(k)
    dim = n + 4
    c = build_operator(OperatorKind.COS_PHI, p, dim).to_dense()
    s = build_operator(OperatorKind.SIN_PHI, p, dim).to_dense()
    comm = s @ c - c @ s
    t = trig_moments(k, n)
    assert t.commutator_expect.real == 0.0
    assert complex(comm[n, n]) == pytest.approx(t.commutator_expect, abs=1e-14)


def test_ground_state_examples():
    assert ground_state_moment(0.5) == pytest.approx(4.0 / 9.0, abs=1e-15)
    assert ground_state_moment(1.0) == pytest.approx(9.0 / 32.0, abs=1e-15)


@given(ks)
def test_ground_state_is_second_moment_at_zero(k):
    assert ground_state_moment(k) == pytest.approx(trig_moments(k, 0).second_moment, rel=1e-14)


def test_k1_bound_two_routes():
    r = k1_lower_bound()
    assert r == pytest.approx(k1_radical(), abs=1e-13)
    assert abs(r - 0.162) < 5e-4
    assert ground_state_moment(r) == pytest.approx(1.0, abs=1e-13)
    # mpmath root of (2k+1)^2 = 8k(k+1)^2 as a third opinion
    ref = mpmath.findroot(lambda k: (2 * k + 1) ** 2 - 8 * k * (k + 1) ** 2, 0.16)
    assert r == pytest.approx(float(ref), abs=1e-14)


def test_ground_state_moment_crosses_one_at_k1():
    r = k1_lower_bound()
    assert ground_state_moment(r * 0.99) > 1.0 > ground_state_moment(r * 1.01)


@pytest.mark.parametrize("k", [0.1, 0.5, 1.0, 2.0, 7.5])
@pytest.mark.parametrize("n", [1, 2, 10, 1000, 10 ** 6])
def test_f_squared_minus_four_mpmath(k, n):
    mpmath.mp.dps = 50
    kk, nn = mpmath.mpf(k), mpmath.mpf(n)
    f = mpmath.sqrt(nn * (2 * kk + nn - 1)) * (1 / (kk + nn) + 1 / (kk + nn - 1))
    ref = float(f * f - 4)
    assert f_squared_minus_four(k, n) == pytest.approx(ref, rel=1e-12)


@given(ks, st.integers(1, 1000))
def test_f_squared_minus_four_consistent(k, n):
    assert f_squared_minus_four(k, n) + 4.0 == pytest.approx(f_coeff(k, n) ** 2, rel=1e-13)


def test_f_squared_minus_four_at_zero():
    assert f_squared_minus_four(1.3, 0) == -4.0


@pytest.mark.parametrize("k", [0.25, 0.5, 1.0, 3.0])
def test_casimir_residual_zero(k):
    rows = correspondence_report(k, [1, 10, 100, 10 ** 4])
    for r in rows:
        assert abs(r.casimir_residual) <= 1e-15 * (r.n + k) ** 2 * 4


def test_k_squares_difference_exactly_zero_at_k_one():
    for r in correspondence_report(1.0, [1, 7, 100, 10 ** 4]):
        assert r.k_squares_difference == 0.0


def test_second_moment_slope():
    ns = [100, 1000, 10000]
    for k in (0.5, 1.0):
        rows = correspondence_report(k, ns)
        assert loglog_slope(ns, [r.second_moment_deviation for r in rows]) == pytest.approx(-2.0, abs=0.05)


def test_commutator_decays_one_order_faster():
    # f_n^2 - 4 is O(n^-2), so its first difference is O(n^-3)
    ns = [100, 1000, 10000]
    for k in (0.5, 1.0):
        rows = correspondence_report(k, ns)
        assert loglog_slope(ns, [r.commutator_magnitude for r in rows]) == pytest.approx(-3.0, abs=0.05)


def test_loglog_slope_exact_power():
    x = np.array([1.0, 10.0, 100.0])
    assert loglog_slope(x, 3 * x ** -2.5) == pytest.approx(-2.5, abs=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        k_moments(1.0, -1)
    with pytest.raises(DomainError):
        trig_moments(0.0, 1)
    with pytest.raises(DomainError):
        correspondence_report(1.0, [])
    with pytest.raises(DomainError):
        correspondence_report(1.0, [0])


def test_number_state_n1_k1_values():
    m = k_moments(1.0, 1)
    assert m.var_K1 == 2.0 and m.var_K2 == 2.0
    assert math.isclose(m.var_K1 * m.var_K2, 4.0)
