"""Spectrum of the phase-cosine operator and the admissibility scan in ``k``.

The truncated cosine operator is a Jacobi matrix (zero diagonal, positive
off-diagonal ``f_{n+1}/4``). Two complementary probes are provided:

* the coherent-state route, scanning ``sup_rho g(k, rho)/I_{2k-1}(2 rho)``
  against its large-``rho`` limit 2 (``<cos>_z`` exceeds 1 iff the ratio
  exceeds 2 at some ``rho``), with a bisection in ``k`` for the threshold;
* direct diagonalisation of the truncated matrix, plus the three-term
  recursion for the non-normalisable generalized eigenvectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .coherent import g_ratio
from .exceptions import ConvergenceError, DomainError, NonMonotoneError
from .irrep import IrrepParams, OperatorKind, _check_k, build_operator, f_coeffs

__all__ = [
    "GridConfig",
    "SupremumResult",
    "ScanReport",
    "ImproperEigenvector",
    "ratio_supremum",
    "is_admissible",
    "threshold_scan",
    "cos_spectrum",
    "improper_eigenvector",
    "OVERFLOW_LIMIT",
]

OVERFLOW_LIMIT = 1e300
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridConfig:
    """Log-spaced ``rho`` grid used to locate the supremum before polishing."""

    rho_min: float = 1e-3
    rho_max: float = 500.0
    points: int = 2000
    polish_tol: float = 1e-10


@dataclass(frozen=True)
class SupremumResult:
    k: float
    sup: float
    at_rho: float
    interior: bool  # False when the maximum sits at rho_max (monotone approach to 2)


@dataclass
class ScanReport:
    k_grid: np.ndarray
    sup_ratio: np.ndarray
    per_k_argmax_rho: np.ndarray
    threshold_bracket: tuple[float, float]
    evaluations: list[SupremumResult] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "k_grid": [float(x) for x in self.k_grid],
            "sup_ratio": [float(x) for x in self.sup_ratio],
            "per_k_argmax_rho": [float(x) for x in self.per_k_argmax_rho],
            "threshold_bracket": [float(x) for x in self.threshold_bracket],
        }


def _golden_max(func, a, b, tol):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(200):
        if abs(b - a) <= tol * max(1.0, abs(c)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = func(d)
    else:
        raise ConvergenceError("golden-section search did not converge")
    return (c, fc) if fc > fd else (d, fd)


def ratio_supremum(k: float, rho_max: float = 500.0, grid_cfg: GridConfig | None = None) -> SupremumResult:
    """Maximise ``g(k, rho) / I_{2k-1}(2 rho)`` over ``rho`` in ``[rho_min, rho_max]``.

    A log grid finds the best sample; golden-section search on the
    neighbouring cells polishes it. A maximum at the right edge means the
    ratio is still climbing toward its limit 2.
    """
    _check_k(k)
    if rho_max < 50.0:
        raise DomainError(f"rho_max must be >= 50, got {rho_max}")
    cfg = grid_cfg or GridConfig(rho_max=rho_max)
    rhos = np.geomspace(cfg.rho_min, rho_max, cfg.points)
    vals = np.array([g_ratio(k, r) for r in rhos])
    i = int(np.argmax(vals))
    if i == len(rhos) - 1:
        return SupremumResult(k, float(vals[i]), float(rhos[i]), False)
    lo = rhos[max(i - 1, 0)]
    hi = rhos[i + 1]
    at, best = _golden_max(lambda r: g_ratio(k, r), lo, hi, cfg.polish_tol)
    if best < vals[i] - 1e-14:
        raise ConvergenceError(f"polishing lost the maximum for k={k}")
    return SupremumResult(k, float(best), float(at), True)


def is_admissible(k: float, grid_cfg: GridConfig | None = None) -> bool:
    """True when ``<cos>_z`` never exceeds 1, i.e. the ratio stays ``<= 2``."""
    cfg = grid_cfg or GridConfig()
    return ratio_supremum(k, cfg.rho_max, cfg).sup <= 2.0


def threshold_scan(k_lo: float, k_hi: float, tol: float = 1e-3,
                   grid_cfg: GridConfig | None = None, probe_points: int = 7) -> ScanReport:
    """Bisect for the smallest admissible ``k`` in ``[k_lo, k_hi]``.

    The predicate is first sampled on ``probe_points`` evenly spaced values;
    any admissible-then-inadmissible pattern raises
    :class:`NonMonotoneError` instead of being bisected through.
    """
    if not 0 < k_lo < k_hi:
        raise DomainError(f"need 0 < k_lo < k_hi, got {k_lo}, {k_hi}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    cfg = grid_cfg or GridConfig()
    results: dict[float, SupremumResult] = {}

    def sup_at(k):
        if k not in results:
            results[k] = ratio_supremum(k, cfg.rho_max, cfg)
        return results[k]

    probes = np.linspace(k_lo, k_hi, max(probe_points, 2))
    flags = [sup_at(float(k)).sup <= 2.0 for k in probes]
    if flags[0]:
        raise DomainError(f"k_lo={k_lo} is already admissible; no threshold in bracket")
    if not flags[-1]:
        raise DomainError(f"k_hi={k_hi} is not admissible; no threshold in bracket")
    first_ok = flags.index(True)
    if not all(flags[first_ok:]):
        raise NonMonotoneError(
            "admissibility is not monotone in k on the probe grid: "
            + ", ".join(f"{k:.4g}:{'ok' if f else 'no'}" for k, f in zip(probes, flags)))
    lo, hi = float(probes[first_ok - 1]), float(probes[first_ok])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if sup_at(mid).sup <= 2.0:
            hi = mid
        else:
            lo = mid
    ks = sorted(results)
    return ScanReport(
        k_grid=np.array(ks),
        sup_ratio=np.array([results[k].sup for k in ks]),
        per_k_argmax_rho=np.array([results[k].at_rho for k in ks]),
        threshold_bracket=(lo, hi),
        evaluations=[results[k] for k in ks],
    )


def cos_spectrum(params: IrrepParams, dim: int, check_residuals: bool = True) -> np.ndarray:
    """Ascending eigenvalues of the ``dim x dim`` truncated cosine operator.

    A Hermitian tridiagonal matrix is diagonally unitarily similar to the
    real one with off-diagonal magnitudes, so ``omega`` drops out here.
    """
    if int(dim) != dim or dim < 10:
        raise DomainError(f"dim must be an integer >= 10, got {dim!r}")
    op = build_operator(OperatorKind.COS_PHI, params, int(dim))
    d = np.asarray(op.diagonal, dtype=float)
    e = np.abs(op.off_diagonal)
    if not check_residuals:
        return eigh_tridiagonal(d, e, eigvals_only=True)
    w, v = eigh_tridiagonal(d, e)
    av = d[:, None] * v
    av[:-1] += e[:, None] * v[1:]
    av[1:] += e[:, None] * v[:-1]
    res = np.linalg.norm(av - v * w, axis=0)
    norm_a = float(np.max(np.abs(w)))
    if np.max(res) > 1e-10 * norm_a:
        raise ConvergenceError(f"eigenpair residual {np.max(res):.2e} exceeds 1e-10 ||A||")
    return w


@dataclass(frozen=True)
class ImproperEigenvector:
    k: float
    mu: float
    coeffs: np.ndarray
    overflowed: bool
    overflow_index: int | None

    def residual(self) -> float:
        """Max ``|(cos a - mu a)_n|`` over rows ``0 .. len-2``, relative to ``max|a|``."""
        a = self.coeffs
        op = build_operator(OperatorKind.COS_PHI, IrrepParams(self.k), len(a))
        r = op.matvec(a) - self.mu * a
        return float(np.max(np.abs(r[:-1])) / np.max(np.abs(a)))


def improper_eigenvector(k: float, mu: float, a0: float = 1.0, n_max: int = 200) -> ImproperEigenvector:
    """Coefficients ``a_0 .. a_{n_max-1}`` of the generalized eigenvector.

    ``a_{n+1} = (4 mu a_n - f_n a_{n-1}) / f_{n+1}`` with ``f_0 = 0``. Outside
    the continuous spectrum the sequence grows geometrically; once
    ``|a_n| > 1e300`` the recursion stops and ``overflowed`` is set.
    """
    _check_k(k)
    if n_max < 2:
        raise DomainError(f"n_max must be >= 2, got {n_max}")
    if a0 == 0:
        raise DomainError("a0 must be nonzero")
    f = f_coeffs(k, n_max)
    a = np.zeros(n_max)
    a[0] = a0
    a[1] = 4.0 * mu * a0 / f[1]
    for n in range(1, n_max - 1):
        if abs(a[n]) > OVERFLOW_LIMIT:
            return ImproperEigenvector(k, mu, a[:n + 1].copy(), True, n)
        a[n + 1] = (4.0 * mu * a[n] - f[n] * a[n - 1]) / f[n + 1]
    if abs(a[-1]) > OVERFLOW_LIMIT:
        return ImproperEigenvector(k, mu, a, True, n_max - 1)
    return ImproperEigenvector(k, mu, a, False, None)
