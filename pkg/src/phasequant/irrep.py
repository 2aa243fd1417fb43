r"""Positive discrete series of SU(1,1) / SO\ :sup:`+`\ (1,2) in the number basis.

Classical picture
-----------------
On the phase space of an angle :math:`\varphi` and a modulus :math:`p > 0`
the three functions :math:`p`, :math:`p\cos\varphi` and :math:`-p\sin\varphi`
close under the Poisson bracket into the Lie algebra of SO(1,2). For two
interfering waves with amplitudes :math:`a_1, a_2` and relative phase
:math:`\varphi`, the modulus is :math:`p = a_1 a_2 = \sqrt{I_1 I_2}`, so the
interference term of :math:`|A|^2` and its quadrature partner are exactly
:math:`2p\cos\varphi` and :math:`-2p\sin\varphi`. Quantization replaces the
triple by the generators :math:`K_3, K_1, K_2` of a positive-discrete-series
irrep labelled by the Bargmann index :math:`k > 0`.

Number basis
------------
:math:`K_3|k,n\rangle = (k+n)|k,n\rangle`, and the ladder operators
:math:`K_\pm = K_1 \pm iK_2` act with magnitudes
:math:`[(2k+n)(n+1)]^{1/2}` and :math:`[(2k+n-1)n]^{1/2}`, carrying a
constant phase :math:`\omega`. Phase operators are the symmetrised products
:math:`\widehat{\cos\varphi} = (K_3^{-1}K_1 + K_1K_3^{-1})/2` and
:math:`\widehat{\sin\varphi} = -(K_3^{-1}K_2 + K_2K_3^{-1})/2`.

All matrices are truncated to ``n < dim``; the coupling between ``dim - 1``
and ``dim`` is dropped, so algebraic identities are only checked on the
interior block (see :func:`casimir_defect`).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exceptions import DomainError
from .specfun import log_gamma

__all__ = [
    "OperatorKind",
    "IrrepParams",
    "TridiagonalOperator",
    "StateVector",
    "ladder_up_coeff",
    "ladder_down_coeff",
    "f_coeff",
    "f_coeffs",
    "build_operator",
    "number_state",
    "number_state_from_ladder",
    "casimir_defect",
    "casimir_defect_full",
    "commutator_defect",
    "interior",
]


class OperatorKind(str, Enum):
    K1 = "K1"
    K2 = "K2"
    K3 = "K3"
    KPLUS = "Kplus"
    KMINUS = "Kminus"
    COS_PHI = "CosPhi"
    SIN_PHI = "SinPhi"


def _check_k(k):
    if not (isinstance(k, (int, float, np.floating, np.integer)) and math.isfinite(k) and k > 0):
        raise DomainError(f"Bargmann index k must be a finite real > 0, got {k!r}")


def _check_n(n):
    if int(n) != n or n < 0:
        raise DomainError(f"basis index n must be a non-negative integer, got {n!r}")


@dataclass(frozen=True)
class IrrepParams:
    """Bargmann index ``k`` and the ladder phase ``omega = exp(i*omega_angle)``."""

    k: float
    omega_angle: float = 0.0

    def __post_init__(self):
        _check_k(self.k)
        if not math.isfinite(self.omega_angle):
            raise DomainError("omega_angle must be finite")
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "omega_angle", float(self.omega_angle) % (2 * math.pi))

    @property
    def omega(self) -> complex:
        if self.omega_angle == 0.0:
            return 1.0 + 0.0j
        return cmath.exp(1j * self.omega_angle)

    @property
    def casimir_eigenvalue(self) -> float:
        """``q = k(1 - k)``."""
        return self.k * (1.0 - self.k)

    @property
    def group_label(self) -> str:
        """Which covering group carries this ``k`` as an allowed label."""
        twice = 2.0 * self.k
        if self.k == round(self.k):
            return "SO(1,2)"
        if twice == round(twice):
            return "SU(1,1)"
        return "universal covering"


def ladder_up_coeff(k: float, n: int) -> float:
    """Magnitude of ``<k,n+1|K+|k,n>``: ``sqrt((2k+n)(n+1))``."""
    _check_k(k)
    _check_n(n)
    return math.sqrt((2.0 * k + n) * (n + 1.0))


def ladder_down_coeff(k: float, n: int) -> float:
    """Magnitude of ``<k,n-1|K-|k,n>``: ``sqrt((2k+n-1)n)``, zero at ``n = 0``."""
    _check_k(k)
    _check_n(n)
    if n == 0:
        return 0.0
    return math.sqrt((2.0 * k + n - 1.0) * n)


def f_coeff(k: float, n: int) -> float:
    r"""Phase-operator coupling :math:`f^{(k)}_n`.

    :math:`f^{(k)}_n = [n(2k+n-1)]^{1/2}\,(1/(k+n) + 1/(k+n-1))`, with
    :math:`f^{(k)}_0 = 0`.
    """
    _check_k(k)
    _check_n(n)
    if n == 0:
        return 0.0
    return math.sqrt(n * (2.0 * k + n - 1.0)) * (1.0 / (k + n) + 1.0 / (k + n - 1.0))


def f_coeffs(k: float, n_max: int, dtype=np.float64) -> np.ndarray:
    """Vector ``[f_0, f_1, ..., f_{n_max}]``."""
    _check_k(k)
    n = np.arange(n_max + 1, dtype=dtype)
    kk = dtype(k)
    out = np.sqrt(n * (2 * kk + n - 1)) * (1 / (kk + n) + 1 / np.where(n > 0, kk + n - 1, 1))
    out[0] = 0
    return out


def _as_kind(kind):
    try:
        return OperatorKind(kind)
    except ValueError:
        raise DomainError(f"unknown operator kind {kind!r}") from None


@dataclass(frozen=True)
class TridiagonalOperator:
    """Truncated tridiagonal matrix of an observable in the ``|k,n>`` basis.

    ``off_diagonal[j]`` is the entry ``(j, j+1)`` and ``sub_diagonal[j]`` the
    entry ``(j+1, j)``; for the Hermitian kinds one is the conjugate of the
    other.
    """

    dim: int
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    sub_diagonal: np.ndarray
    kind: OperatorKind
    params: IrrepParams

    def __post_init__(self):
        for arr in (self.diagonal, self.off_diagonal, self.sub_diagonal):
            arr.setflags(write=False)

    @property
    def is_hermitian(self) -> bool:
        return self.kind not in (OperatorKind.KPLUS, OperatorKind.KMINUS)

    def to_dense(self) -> np.ndarray:
        dtype = np.result_type(self.diagonal, self.off_diagonal, self.sub_diagonal)
        out = np.zeros((self.dim, self.dim), dtype=dtype)
        idx = np.arange(self.dim)
        out[idx, idx] = self.diagonal
        out[idx[:-1], idx[1:]] = self.off_diagonal
        out[idx[1:], idx[:-1]] = self.sub_diagonal
        return out

    def matvec(self, v) -> np.ndarray:
        """Apply the truncated operator to a length-``dim`` vector."""
        v = np.asarray(v)
        if v.shape[0] != self.dim:
            raise DomainError(f"vector length {v.shape[0]} != operator dim {self.dim}")
        out = self.diagonal * v
        out = out.astype(np.result_type(out, self.off_diagonal, self.sub_diagonal), copy=False)
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.sub_diagonal * v[:-1]
        return out

    def entries(self):
        """Yield ``(row, col, value)`` for every structurally nonzero entry."""
        for j in range(self.dim):
            if j > 0:
                yield j, j - 1, complex(self.sub_diagonal[j - 1])
            yield j, j, complex(self.diagonal[j])
            if j < self.dim - 1:
                yield j, j + 1, complex(self.off_diagonal[j])


def build_operator(kind, params: IrrepParams, dim: int, dtype=np.float64) -> TridiagonalOperator:
    """Truncated matrix of ``kind`` on ``span{|k,n> : n < dim}``.

    Rows ``0 .. dim-2`` reproduce the exact action of the infinite operator;
    row ``dim-1`` misses its coupling to ``|k,dim>``. ``dtype`` selects the
    working real precision (``np.longdouble`` for extended-precision checks).
    """
    kind = _as_kind(kind)
    if int(dim) != dim or dim < 2:
        raise DomainError(f"dim must be an integer >= 2, got {dim!r}")
    dim = int(dim)
    k = dtype(params.k)
    n = np.arange(dim - 1, dtype=dtype)
    up = np.sqrt((2 * k + n) * (n + 1))
    phase_real = params.omega_angle == 0.0
    cdtype = np.result_type(dtype, np.complex64).type
    # built in the working precision so |omega| = 1 holds to that precision
    theta = dtype(params.omega_angle)
    wc = cdtype(np.cos(theta)) + cdtype(1j) * cdtype(np.sin(theta))

    diag = np.zeros(dim, dtype=dtype)
    if kind is OperatorKind.K3:
        diag = k + np.arange(dim, dtype=dtype)
        sub = np.zeros(dim - 1, dtype=dtype)
        sup = np.zeros(dim - 1, dtype=dtype)
    elif kind is OperatorKind.KPLUS:
        sub = up * wc if not phase_real else up
        sup = np.zeros(dim - 1, dtype=sub.dtype)
    elif kind is OperatorKind.KMINUS:
        sup = up * np.conj(wc) if not phase_real else up
        sub = np.zeros(dim - 1, dtype=sup.dtype)
    elif kind is OperatorKind.K1:
        sub = up / 2 * wc if not phase_real else up / 2
        sup = np.conj(sub)
    elif kind is OperatorKind.K2:
        sub = -1j * wc * up / 2
        sup = np.conj(sub)
    else:
        f = f_coeffs(params.k, dim - 1, dtype=dtype)[1:]
        if kind is OperatorKind.COS_PHI:
            sub = f / 4 * wc if not phase_real else f / 4
        else:
            sub = 1j * wc * f / 4
        sup = np.conj(sub)
    return TridiagonalOperator(dim, diag, np.asarray(sup), np.asarray(sub), kind, params)


@dataclass
class StateVector:
    """Finite coefficient vector over ``|k,n>``, ``n < len(coeffs)``.

    ``tail_bound`` estimates the squared norm carried by ``n >= len(coeffs)``.
    """

    coeffs: np.ndarray
    params: IrrepParams
    tail_bound: float = 0.0

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.coeffs, self.coeffs).real)

    def expect(self, op: TridiagonalOperator) -> complex:
        """``<psi|A|psi>`` using the tridiagonal action."""
        return complex(np.vdot(self.coeffs, op.matvec(self.coeffs)))


def number_state(params: IrrepParams, n: int, dim: int) -> StateVector:
    """Basis vector ``|k,n>`` in a ``dim``-dimensional truncation."""
    _check_n(n)
    if n >= dim:
        raise DomainError(f"n={n} does not fit in dim={dim}")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return StateVector(v, params, 0.0)


def number_state_from_ladder(params: IrrepParams, n: int, dim: int) -> np.ndarray:
    """``omega^-n [Gamma(2k)/(n! Gamma(2k+n))]^(1/2) (K+)^n |k,0>``.

    Should reproduce the basis vector ``|k,n>`` when ``n < dim``.
    """
    _check_n(n)
    if n >= dim:
        raise DomainError(f"n={n} does not fit in dim={dim}")
    kp = build_operator(OperatorKind.KPLUS, params, dim)
    v = np.zeros(dim, dtype=complex)
    v[0] = 1.0
    for _ in range(n):
        v = kp.matvec(v)
    k = params.k
    log_norm = 0.5 * (log_gamma(2 * k) - log_gamma(n + 1.0) - log_gamma(2 * k + n))
    return v * math.exp(log_norm) * params.omega ** (-n)


def interior(mat: np.ndarray, margin: int = 2) -> np.ndarray:
    """Leading block that excludes the last ``margin`` rows and columns."""
    m = mat.shape[0] - margin
    return mat[:m, :m]


def _generators(params, dim, dtype):
    return [build_operator(kind, params, dim, dtype=dtype).to_dense()
            for kind in (OperatorKind.K1, OperatorKind.K2, OperatorKind.K3)]


def _check_dim(dim, minimum=4):
    if int(dim) != dim or dim < minimum:
        raise DomainError(f"dim must be an integer >= {minimum} for an interior block, got {dim!r}")


def casimir_defect_full(params: IrrepParams, dim: int, dtype=np.longdouble) -> np.ndarray:
    """``K1^2 + K2^2 - K3^2 - k(1-k) Id`` on the whole truncated space."""
    _check_dim(dim, 2)
    k1, k2, k3 = _generators(params, int(dim), dtype)
    q = dtype(params.k) * (1 - dtype(params.k))
    return k1 @ k1 + k2 @ k2 - k3 @ k3 - q * np.eye(int(dim), dtype=dtype)


def casimir_defect(params: IrrepParams, dim: int, dtype=np.longdouble) -> float:
    """Max ``|entry|`` of the Casimir identity residual on the interior block.

    Rows and columns ``dim-2`` and ``dim-1`` are excluded because the dropped
    coupling spoils the identity there. Entries of ``K3^2`` grow like
    ``dim^2``, so in double precision the residual floor is about
    ``dim^2 * 2e-16``; the default extended precision keeps the check well
    below ``1e-12`` up to a few hundred states.
    """
    _check_dim(dim)
    return float(np.max(np.abs(interior(casimir_defect_full(params, dim, dtype)))))


def commutator_defect(params: IrrepParams, dim: int, dtype=np.longdouble) -> tuple[float, float, float]:
    """Interior residuals of ``[K3,K1] - iK2``, ``[K3,K2] + iK1``, ``[K1,K2] + iK3``."""
    _check_dim(dim)
    k1, k2, k3 = _generators(params, int(dim), dtype)
    res = (
        k3 @ k1 - k1 @ k3 - 1j * k2,
        k3 @ k2 - k2 @ k3 + 1j * k1,
        k1 @ k2 - k2 @ k1 + 1j * k3,
    )
    return tuple(float(np.max(np.abs(interior(r)))) for r in res)
