r"""Bosonic constructions: the two-mode SU(1,1) realization and a Dirac square root.

With two oscillators :math:`a_1, a_2`,

.. math::

    K_3 = (a_1^\dagger a_1 + a_2^\dagger a_2 + 1)/2, \quad
    K_+ = a_1^\dagger a_2^\dagger, \quad K_- = a_1 a_2

close the same algebra as the abstract generators. The Fock space splits
into sectors of fixed :math:`\Delta = |m_1 - m_2|`, each carrying the irrep
with :math:`k = 1/2 + \Delta/2` and :math:`n = \min(m_1, m_2)`.

Matrices live on the truncated space :math:`m_1, m_2 < M`, indexed
``m1 * M + m2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import DomainError
from .irrep import IrrepParams, OperatorKind, build_operator, interior

__all__ = [
    "TwoModeKind",
    "TwoModeOperator",
    "SectorRecord",
    "DiracResult",
    "build_two_mode",
    "two_mode_commutator_defect",
    "sector_states",
    "sector_matrix",
    "irrep_decomposition",
    "dirac_sqrt_operator",
    "dirac_eigenvector",
    "dirac_sqrt_check",
]


class TwoModeKind(str, Enum):
    K3A = "K3a"
    KPLUS_A = "Kplus_a"
    KMINUS_A = "Kminus_a"
    N1 = "N1"
    N2 = "N2"


@dataclass(frozen=True)
class TwoModeOperator:
    dim_per_mode: int
    matrix: np.ndarray
    kind: TwoModeKind

    def index(self, m1: int, m2: int) -> int:
        return m1 * self.dim_per_mode + m2

    def element(self, row: tuple[int, int], col: tuple[int, int]) -> float:
        return float(self.matrix[self.index(*row), self.index(*col)])


def _check_m(M, minimum):
    if int(M) != M or M < minimum:
        raise DomainError(f"M must be an integer >= {minimum}, got {M!r}")
    return int(M)


def build_two_mode(kind, M: int) -> TwoModeOperator:
    """Dense ``M**2 x M**2`` matrix of a two-mode operator."""
    M = _check_m(M, 2)
    try:
        kind = TwoModeKind(kind)
    except ValueError:
        raise DomainError(f"unknown two-mode kind {kind!r}") from None
    m1, m2 = np.divmod(np.arange(M * M), M)
    mat = np.zeros((M * M, M * M))
    if kind is TwoModeKind.K3A:
        mat[np.diag_indices(M * M)] = 0.5 * (m1 + m2 + 1)
    elif kind is TwoModeKind.N1:
        mat[np.diag_indices(M * M)] = m1
    elif kind is TwoModeKind.N2:
        mat[np.diag_indices(M * M)] = m2
    else:
        ok = (m1 < M - 1) & (m2 < M - 1)
        src = np.nonzero(ok)[0]
        dst = (m1[ok] + 1) * M + (m2[ok] + 1)
        coef = np.sqrt((m1[ok] + 1.0) * (m2[ok] + 1.0))
        mat[dst, src] = coef
        if kind is TwoModeKind.KMINUS_A:
            mat = mat.T.copy()
    return TwoModeOperator(M, mat, kind)


def _interior_mask(M, margin=2):
    m1, m2 = np.divmod(np.arange(M * M), M)
    return (m1 <= M - 1 - margin) & (m2 <= M - 1 - margin)


def _generators(M):
    kp = build_two_mode(TwoModeKind.KPLUS_A, M).matrix
    km = build_two_mode(TwoModeKind.KMINUS_A, M).matrix
    k3 = build_two_mode(TwoModeKind.K3A, M).matrix.astype(complex)
    return (kp + km) / 2, (kp - km) / 2j, k3


def two_mode_commutator_defect(M: int, interior_only: bool = True) -> tuple[float, float, float]:
    """Residuals of ``[K3,K1] - iK2``, ``[K3,K2] + iK1``, ``[K1,K2] + iK3``.

    With ``interior_only`` the max is taken over states with both mode
    numbers ``<= M-3``; otherwise over the whole truncated space, where the
    dropped couplings leave an O(M) defect.
    """
    M = _check_m(M, 4 if interior_only else 2)
    k1, k2, k3 = _generators(M)
    res = (
        k3 @ k1 - k1 @ k3 - 1j * k2,
        k3 @ k2 - k2 @ k3 + 1j * k1,
        k1 @ k2 - k2 @ k1 + 1j * k3,
    )
    if interior_only:
        mask = _interior_mask(M)
        res = tuple(r[np.ix_(mask, mask)] for r in res)
    return tuple(float(np.max(np.abs(r))) for r in res)


def sector_states(M: int, delta: int, branch: int = 1) -> list[tuple[int, int, int]]:
    """``(m1, m2, n)`` in the sector ``m1 - m2 = branch * delta``, ordered by ``n``."""
    M = _check_m(M, 2)
    if delta < 0 or delta >= M:
        raise DomainError(f"delta must lie in [0, {M - 1}], got {delta}")
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")
    out = []
    for n in range(M - delta):
        m1, m2 = (n + delta, n) if branch == 1 else (n, n + delta)
        out.append((m1, m2, n))
    return out


def sector_matrix(kind, M: int, delta: int, branch: int = 1) -> np.ndarray:
    """Two-mode operator restricted to one sector, re-indexed by ``n``."""
    op = build_two_mode(kind, M)
    idx = [m1 * M + m2 for m1, m2, _ in sector_states(M, delta, branch)]
    return op.matrix[np.ix_(idx, idx)]


@dataclass(frozen=True)
class SectorRecord:
    delta: int
    branch: int
    k: float
    states: list
    max_defect: float

    @property
    def multiplicity(self) -> int:
        return len(self.states)


_IRREP_KIND = {
    TwoModeKind.K3A: OperatorKind.K3,
    TwoModeKind.KPLUS_A: OperatorKind.KPLUS,
    TwoModeKind.KMINUS_A: OperatorKind.KMINUS,
}


def irrep_decomposition(M: int) -> list[SectorRecord]:
    """Split the truncated two-mode space into irrep sectors.

    Each record's ``max_defect`` is the largest deviation, over the sector's
    interior, between its ``K3``, ``K+``, ``K-`` matrices and the abstract
    irrep matrices for ``k = 1/2 + delta/2``. ``K3`` is compared against
    ``n + k`` exactly.
    """
    M = _check_m(M, 2)
    records = []
    for delta in range(M):
        k = 0.5 + 0.5 * delta
        for branch in ((1,) if delta == 0 else (1, -1)):
            states = sector_states(M, delta, branch)
            size = len(states)
            defect = 0.0
            if size >= 2:
                params = IrrepParams(k)
                for kind, ikind in _IRREP_KIND.items():
                    sec = sector_matrix(kind, M, delta, branch)
                    ref = build_operator(ikind, params, size).to_dense()
                    margin = 1 if size >= 3 else 0
                    diff = np.abs(interior(sec - ref, margin)) if margin else np.abs(sec - ref)
                    defect = max(defect, float(np.max(diff)))
            else:
                sec = sector_matrix(TwoModeKind.K3A, M, delta, branch)
                defect = abs(float(sec[0, 0]) - k)
            records.append(SectorRecord(delta, branch, k, states, defect))
    return records


def dirac_sqrt_operator(M: int) -> np.ndarray:
    """Block matrix ``[[0, b+], [b, 0]]`` on two copies of an ``M``-level oscillator."""
    M = _check_m(M, 2)
    b = np.diag(np.sqrt(np.arange(1, M, dtype=float)), 1)
    out = np.zeros((2 * M, 2 * M))
    out[:M, M:] = b.T
    out[M:, :M] = b
    return out


def dirac_eigenvector(M: int, n: int) -> np.ndarray:
    """``(|n>, |n-1>)``; for ``n = 0`` the lower component vanishes."""
    M = _check_m(M, 2)
    if not 0 <= n < M:
        raise DomainError(f"n must lie in [0, {M - 1}], got {n}")
    v = np.zeros(2 * M)
    v[n] = 1.0
    if n > 0:
        v[M + n - 1] = 1.0
    return v


@dataclass(frozen=True)
class DiracResult:
    defect: float
    eigen_ok: bool
    eigen_residual: float


def dirac_sqrt_check(M: int, tol: float = 1e-12) -> DiracResult:
    """Check that the block operator squares to ``diag(N, N+1)``.

    ``defect`` is measured with the top level of each block removed (the
    truncated ``b b+`` misses ``M`` there). Every ``(|n>, |n-1>)`` with
    ``n < M`` is an exact eigenvector with eigenvalue ``sqrt(n)``.
    """
    M = _check_m(M, 3)
    s = dirac_sqrt_operator(M)
    n = np.arange(M, dtype=float)
    target = np.diag(np.concatenate([n, n + 1]))
    keep = np.ones(2 * M, dtype=bool)
    keep[M - 1] = keep[2 * M - 1] = False
    defect = float(np.max(np.abs((s @ s - target)[np.ix_(keep, keep)])))
    worst = 0.0
    for j in range(M):
        v = dirac_eigenvector(M, j)
        worst = max(worst, float(np.max(np.abs(s @ v - np.sqrt(j) * v))))
    return DiracResult(defect, worst < tol, worst)
