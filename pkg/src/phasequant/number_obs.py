"""Moments of the generators and phase operators in number states ``|k,n>``.

Everything here is closed form. Large-``n`` deviations from the classical
limits are computed from rearranged expressions that avoid cancellation, so
the ``O(n**-2)`` decay stays resolvable out to ``n = 10**4`` and beyond.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .exceptions import ConsistencyError, DomainError
from .irrep import _check_k, _check_n, f_coeff

__all__ = [
    "KMoments",
    "TrigMoments",
    "CorrespondenceRow",
    "k_moments",
    "trig_moments",
    "ground_state_moment",
    "k1_lower_bound",
    "k1_radical",
    "f_squared_minus_four",
    "correspondence_report",
    "loglog_slope",
]


@dataclass(frozen=True)
class KMoments:
    mean_K1: float
    mean_K2: float
    var_K1: float
    var_K2: float


@dataclass(frozen=True)
class TrigMoments:
    mean_cos: float
    mean_sin: float
    second_moment: float
    commutator_expect: complex


@dataclass(frozen=True)
class CorrespondenceRow:
    n: int
    casimir_residual: float
    k_squares_difference: float
    second_moment_deviation: float
    commutator_magnitude: float


def k_moments(k: float, n: int) -> KMoments:
    """Means and variances of ``K1``, ``K2`` in ``|k,n>``."""
    _check_k(k)
    _check_n(n)
    var = 0.5 * n * (2.0 * k + n) + 0.5 * k
    return KMoments(0.0, 0.0, var, var)


def f_squared_minus_four(k: float, n: int) -> float:
    r"""``f_n**2 - 4`` without cancellation.

    With ``m = n + k - 1/2`` and ``c = k - 1/2``,
    :math:`f_n^2 - 4 = 4\,[m^2(1/2 - c^2) - 1/16] / (m^2 - 1/4)^2`.
    """
    _check_k(k)
    _check_n(n)
    if n == 0:
        return -4.0
    m = n + k - 0.5
    c = k - 0.5
    m2 = m * m
    return 4.0 * (m2 * (0.5 - c * c) - 0.0625) / (m2 - 0.25) ** 2


def trig_moments(k: float, n: int) -> TrigMoments:
    """Phase-operator moments in ``|k,n>``.

    ``<cos^2> = <sin^2> = (f_{n+1}^2 + f_n^2)/16`` and
    ``<[sin, cos]> = (f_{n+1}^2 - f_n^2)/(8i)``; both means vanish.
    """
    _check_k(k)
    _check_n(n)
    hi = f_coeff(k, n + 1) ** 2
    lo = f_coeff(k, n) ** 2
    return TrigMoments(0.0, 0.0, (hi + lo) / 16.0, complex(0.0, -(hi - lo) / 8.0))


def ground_state_moment(k: float) -> float:
    """``<k,0|cos^2|k,0> = (2k+1)^2 / (8k(k+1)^2)``."""
    _check_k(k)
    return (2.0 * k + 1.0) ** 2 / (8.0 * k * (k + 1.0) ** 2)


def k1_radical() -> float:
    """Cardano root of ``(2k+1)^2 = 8k(k+1)^2``."""
    s = 0.5 * math.sqrt(23.0 / 27.0)
    return ((0.5 + s) ** (1.0 / 3.0) + (0.5 - s) ** (1.0 / 3.0) - 1.0) / 2.0


def k1_lower_bound(tol: float = 1e-12) -> float:
    """Smallest ``k`` with ``<k,0|cos^2|k,0> <= 1``.

    Computed from the radical and, independently, by Brent's method on
    ``ground_state_moment(k) - 1``; raises :class:`ConsistencyError` if the
    two disagree by more than ``tol``.
    """
    radical = k1_radical()
    bracketed = brentq(lambda k: ground_state_moment(k) - 1.0, 0.05, 1.0, xtol=1e-15, rtol=1e-15)
    if abs(radical - bracketed) > tol:
        raise ConsistencyError(f"k1: radical {radical!r} vs root-finder {bracketed!r}")
    return bracketed


def correspondence_report(k: float, n_list) -> list[CorrespondenceRow]:
    """Large-``n`` behaviour of number-state moments.

    For each ``n``: the Casimir residual ``<K1^2>+<K2^2>-<K3^2>-k(1-k)``
    (zero up to rounding), the bare difference ``<K1^2>+<K2^2>-<K3^2>``
    (zero at ``k = 1``), ``<cos^2> - 1/2`` and ``|<[sin, cos]>|``.
    """
    _check_k(k)
    n_list = list(n_list)
    if not n_list:
        raise DomainError("n_list must be non-empty")
    rows = []
    for n in n_list:
        _check_n(n)
        if n < 1:
            raise DomainError(f"correspondence_report needs n >= 1, got {n}")
        kk = k_moments(k, n)
        k3_sq = (k + n) ** 2
        diff = kk.var_K1 + kk.var_K2 - k3_sq
        hi = f_squared_minus_four(k, n + 1)
        lo = f_squared_minus_four(k, n)
        rows.append(CorrespondenceRow(
            n=int(n),
            casimir_residual=diff - k * (1.0 - k),
            k_squares_difference=diff,
            second_moment_deviation=(hi + lo) / 16.0,
            commutator_magnitude=abs(hi - lo) / 8.0,
        ))
    return rows


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log|y|`` against ``log x``."""
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])
