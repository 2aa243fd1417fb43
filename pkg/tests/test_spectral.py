import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasequant import spectral
from phasequant.exceptions import DomainError, NonMonotoneError
from phasequant.irrep import IrrepParams, OperatorKind, build_operator
from phasequant.spectral import (
    OVERFLOW_LIMIT,
    GridConfig,
    cos_spectrum,
    improper_eigenvector,
    is_admissible,
    ratio_supremum,
    threshold_scan,
)

FAST = GridConfig(points=400)


# ---------------------------------------------------------------- spectrum

@pytest.mark.parametrize("k,angle", [(0.5, 0.0), (1.0, 0.0), (0.25, 1.3), (2.0, 4.0)])
def test_spectrum_matches_dense_eigensolver(k, angle):
    p = IrrepParams(k, angle)
    w = cos_spectrum(p, 120)
    ref = np.linalg.eigvalsh(build_operator(OperatorKind.COS_PHI, p, 120).to_dense())
    assert np.allclose(w, ref, atol=1e-13)


@given(st.floats(0.1, 3.0), st.floats(0.0, 2 * math.pi))
@settings(max_examples=20)
def test_spectrum_independent_of_omega(k, angle):
    assert np.allclose(cos_spectrum(IrrepParams(k), 60), cos_spectrum(IrrepParams(k, angle), 60), atol=1e-13)


def test_spectrum_symmetric():
    w = cos_spectrum(IrrepParams(0.7), 101)
    assert np.allclose(w, -w[::-1], atol=1e-13)


def test_spectrum_k1_inside_unit_interval():
    w = cos_spectrum(IrrepParams(1.0), 2000)
    assert len(w) == 2000
    assert np.all(np.abs(w) <= 1 + 1e-3)
    # the continuous spectrum fills [-1, 1]
    assert w[-1] > 0.999


def test_spectrum_k_quarter_exceeds_one():
    assert cos_spectrum(IrrepParams(0.25), 2000)[-1] > 1.0


def test_isolated_eigenvalue_at_half_is_converged():
    # an eigenvalue above 1 that does not move with the truncation is a bound state
    tops = [cos_spectrum(IrrepParams(0.5), d)[-1] for d in (250, 1000, 2000)]
    assert tops[0] > 1.006
    assert max(tops) - min(tops) < 1e-12


def test_spectrum_dim_domain():
    with pytest.raises(DomainError):
        cos_spectrum(IrrepParams(1.0), 5)


def test_spectrum_without_residual_check():
    p = IrrepParams(1.3)
    assert np.allclose(cos_spectrum(p, 50, check_residuals=False), cos_spectrum(p, 50), atol=1e-15)


# ---------------------------------------------------------------- improper eigenvectors

@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("mu", [-0.9, 0.0, 0.3, 0.99])
def test_improper_residual(k, mu):
    v = improper_eigenvector(k, mu, n_max=200)
    assert not v.overflowed
    assert v.residual() < 1e-12


def test_improper_mu_zero_odd_coefficients_vanish():
    v = improper_eigenvector(1.0, 0.0, n_max=50)
    assert np.all(v.coeffs[1::2] == 0.0)


def test_improper_mpmath_recursion():
    mpmath.mp.dps = 40
    k, mu = mpmath.mpf(0.75), mpmath.mpf("0.4")

    def f(n):
        if n == 0:
            return mpmath.mpf(0)
        return mpmath.sqrt(n * (2 * k + n - 1)) * (1 / (k + n) + 1 / (k + n - 1))

    a = [mpmath.mpf(1), 4 * mu / f(1)]
    for n in range(1, 40):
        a.append((4 * mu * a[n] - f(n) * a[n - 1]) / f(n + 1))
    v = improper_eigenvector(0.75, 0.4, n_max=41)
    assert np.allclose(v.coeffs, [float(x) for x in a], rtol=1e-12, atol=1e-14)


def test_improper_bounded_inside_band():
    # inside (-1, 1) the solution oscillates with roughly constant envelope
    v = improper_eigenvector(1.0, 0.5, n_max=2000)
    assert np.max(np.abs(v.coeffs)) < 10


def test_improper_overflow_outside_band():
    mu = 1.5
    v = improper_eigenvector(1.0, mu, n_max=1000)
    assert v.overflowed
    assert np.all(np.isfinite(v.coeffs))
    # growth factor tends to mu + sqrt(mu^2 - 1)
    expected = math.log(OVERFLOW_LIMIT) / math.log(mu + math.sqrt(mu * mu - 1))
    assert abs(v.overflow_index - expected) < 0.03 * expected
    assert v.residual() < 1e-12


def test_improper_domain():
    with pytest.raises(DomainError):
        improper_eigenvector(1.0, 0.5, a0=0.0)
    with pytest.raises(DomainError):
        improper_eigenvector(1.0, 0.5, n_max=1)


# ---------------------------------------------------------------- admissibility

def test_ratio_supremum_k_quarter():
    r = ratio_supremum(0.25, grid_cfg=FAST)
    assert r.sup > 2.0 and r.interior
    assert 0.5 < r.at_rho < 2.0


def test_ratio_supremum_matches_mpmath_at_peak():
    mpmath.mp.dps = 30
    r = ratio_supremum(0.25, grid_cfg=FAST)
    k, rho = mpmath.mpf(0.25), mpmath.mpf(r.at_rho)
    g = mpmath.nsum(lambda n: rho ** (2 * (n + k)) / (mpmath.factorial(n) * mpmath.gamma(2 * k + n))
                    * (1 / (n + k) + 1 / (n + k + 1)), [0, mpmath.inf])
    assert r.sup == pytest.approx(float(g / mpmath.besseli(2 * k - 1, 2 * rho)), rel=1e-12)


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_large_k_admissible(k):
    assert is_admissible(k, FAST)


def test_k_quarter_inadmissible():
    assert not is_admissible(0.25, FAST)


def test_rho_max_domain():
    with pytest.raises(DomainError):
        ratio_supremum(1.0, rho_max=10.0)


def test_threshold_scan_bracket():
    rep = threshold_scan(0.30, 0.34, tol=1e-3, grid_cfg=FAST, probe_points=3)
    lo, hi = rep.threshold_bracket
    assert hi - lo <= 1e-3
    assert 0.30 <= lo < hi <= 0.34
    assert not is_admissible(lo, FAST) and is_admissible(hi, FAST)
    d = rep.to_dict()
    assert d["threshold_bracket"] == [lo, hi]
    assert len(d["k_grid"]) == len(d["sup_ratio"]) == len(d["per_k_argmax_rho"])


def test_threshold_scan_bad_brackets():
    with pytest.raises(DomainError):
        threshold_scan(0.5, 1.0, grid_cfg=FAST, probe_points=2)
    with pytest.raises(DomainError):
        threshold_scan(0.1, 0.2, grid_cfg=FAST, probe_points=2)
    with pytest.raises(DomainError):
        threshold_scan(0.3, 0.2)


def test_threshold_scan_detects_non_monotone(monkeypatch):
    def fake(k, rho_max=500.0, grid_cfg=None):
        # admissible only on a middle window
        sup = 1.9 if 0.4 < k < 0.6 else 2.1
        if k >= 0.9:
            sup = 1.9
        return spectral.SupremumResult(k, sup, 1.0, True)

    monkeypatch.setattr(spectral, "ratio_supremum", fake)
    with pytest.raises(NonMonotoneError):
        threshold_scan(0.1, 1.0, probe_points=10)
