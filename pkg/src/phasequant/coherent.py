r"""Barut-Girardello coherent states, eigenstates of the lowering operator.

For :math:`z = \rho e^{i\alpha}` the state :math:`|z\rangle` satisfies
:math:`K_-|z\rangle = z|z\rangle` and expands as

.. math::

    |z\rangle = \frac{\rho^{k-1/2}}{\sqrt{I_{2k-1}(2\rho)}}
    \sum_n \frac{z^n}{\sqrt{n!\,\Gamma(2k+n)}}\,|k,n\rangle .

Coefficients and photon-number probabilities are evaluated in log space so
that ``rho`` in the hundreds does not overflow. A non-trivial ladder phase
``omega`` is absorbed by building the ``omega = 1`` coefficients at ``z*omega``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate

from .exceptions import ConvergenceError, DomainError, TruncationError
from .irrep import IrrepParams, OperatorKind, StateVector, build_operator
from .specfun import bessel_i, bessel_i_ratio, bessel_k, log_bessel_i, log_gamma

__all__ = [
    "CoherentSpec",
    "PhotonDistribution",
    "K3Moments",
    "K12Moments",
    "UncertaintyResult",
    "TrigExpectation",
    "QuadConfig",
    "CompletenessResult",
    "TAIL_TOL",
    "required_dim",
    "coherent_vector",
    "photon_distribution",
    "fano_factor",
    "poisson_tv_distance",
    "k3_moments",
    "k12_moments",
    "uncertainty_check",
    "g_function",
    "log_g_series",
    "g_ratio",
    "trig_expectation",
    "trig_second_moment",
    "completeness_check",
    "completeness_integral",
    "radial_tail_bound",
    "overlap",
    "eigen_residual",
]

TAIL_TOL = 1e-12


@dataclass(frozen=True)
class CoherentSpec:
    """Irrep parameters plus the complex label ``z`` of a coherent state."""

    params: IrrepParams
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise DomainError(f"z must be finite, got {self.z!r}")
        object.__setattr__(self, "z", z)

    @classmethod
    def from_polar(cls, k, rho, alpha=0.0, omega_angle=0.0):
        if rho < 0:
            raise DomainError(f"rho must be >= 0, got {rho}")
        return cls(IrrepParams(k, omega_angle), cmath.rect(rho, alpha))

    @property
    def k(self) -> float:
        return self.params.k

    @property
    def rho(self) -> float:
        return abs(self.z)

    @property
    def alpha(self) -> float:
        return cmath.phase(self.z) % (2 * math.pi)


# ---------------------------------------------------------------------------
# log-space building blocks
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _log_factorial_gamma(k: float, size: int) -> np.ndarray:
    # ln(n!) + ln Gamma(2k + n) for n < size
    out = np.array([log_gamma(n + 1.0) + log_gamma(2.0 * k + n) for n in range(size)])
    out.setflags(write=False)
    return out


def _logsumexp(a, weights=None):
    m = np.max(a)
    if not np.isfinite(m):
        return m
    e = np.exp(a - m)
    if weights is not None:
        e = e * weights
    return m + math.log(np.sum(e))


def _n_far(mean, var):
    return int(math.ceil(mean + 40.0 * math.sqrt(var) + 60.0))


def _log_probs(k, rho, size):
    """``ln |<k,n|z>|^2`` for ``n < size`` and ``rho > 0``."""
    n = np.arange(size)
    log_rho = math.log(rho)
    return ((2.0 * (n + k) - 1.0) * log_rho - _log_factorial_gamma(k, size)
            - log_bessel_i(2.0 * k - 1.0, 2.0 * rho))


def _tails(p):
    """``tails[N] = sum_{n >= N} p[n]`` (last entry is 0)."""
    t = np.zeros(len(p) + 1)
    t[:-1] = np.cumsum(p[::-1])[::-1]
    return t


def _number_stats(k, rho):
    r = bessel_i_ratio(2.0 * k - 1.0, 2.0 * rho)
    mean = rho * r
    var = rho * rho * (1.0 - r * r) + (1.0 - 2.0 * k) * rho * r
    return mean, max(var, 0.0)


def required_dim(spec: CoherentSpec, tail_tol: float = TAIL_TOL) -> int:
    """Smallest truncation with ``mean + 12 sd < N`` and tail mass ``< tail_tol``."""
    if spec.rho == 0.0:
        return 2
    mean, var = _number_stats(spec.k, spec.rho)
    size = _n_far(mean, var)
    tails = _tails(np.exp(_log_probs(spec.k, spec.rho, size)))
    n_tail = int(np.argmax(tails < tail_tol))
    n_spread = int(math.floor(mean + 12.0 * math.sqrt(var))) + 1
    return max(n_tail, n_spread, 2)


# ---------------------------------------------------------------------------
# states and distributions
# ---------------------------------------------------------------------------

def coherent_vector(spec: CoherentSpec, dim: int | None = None,
                    tail_tol: float = TAIL_TOL) -> StateVector:
    """Coefficient vector of ``|z>`` over ``|k,n>``, ``n < dim``.

    With ``dim=None`` the adaptive truncation of :func:`required_dim` is used.
    The coefficients carry the exact normalisation, so
    ``norm_squared + tail_bound`` is 1 up to rounding. Expectation values
    of bounded operators taken on the truncated vector miss a cross term of
    size up to ``||A|| sqrt(tail_bound)``; pass a larger ``dim`` when that
    matters.

    Raises
    ------
    TruncationError
        If the squared norm beyond ``dim`` exceeds ``tail_tol``; the error's
        ``required_dim`` attribute holds a sufficient size.
    """
    k, rho = spec.k, spec.rho
    if dim is None:
        dim = required_dim(spec, tail_tol)
    if dim < 1:
        raise DomainError(f"dim must be >= 1, got {dim}")
    if rho == 0.0:
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        return StateVector(v, spec.params, 0.0)
    mean, var = _number_stats(k, rho)
    size = max(_n_far(mean, var), dim + 1)
    p = np.exp(_log_probs(k, rho, size))
    tail = float(np.sum(p[dim:]))
    if tail >= tail_tol:
        raise TruncationError(
            f"dim={dim} leaves tail mass {tail:.3e} >= {tail_tol:.0e} for k={k}, rho={rho}",
            required_dim=required_dim(spec, tail_tol))
    alpha = spec.alpha + spec.params.omega_angle
    n = np.arange(dim)
    coeffs = np.sqrt(p[:dim]) * np.exp(1j * alpha * n)
    return StateVector(coeffs, spec.params, tail)


@dataclass(frozen=True)
class PhotonDistribution:
    """``probs[n] = |<k,n|z>|^2`` for ``n <= n_max``; ``tail`` is the rest."""

    probs: np.ndarray
    tail: float

    @property
    def mean(self) -> float:
        n = np.arange(len(self.probs))
        return float(np.sum(n * self.probs) / np.sum(self.probs))

    @property
    def var(self) -> float:
        n = np.arange(len(self.probs))
        w = self.probs / np.sum(self.probs)
        mu = np.sum(n * w)
        return float(np.sum((n - mu) ** 2 * w))


def photon_distribution(spec: CoherentSpec, n_max: int) -> PhotonDistribution:
    """Number-state probabilities of ``|z>`` (not Poissonian)."""
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    if spec.rho == 0.0:
        p = np.zeros(n_max + 1)
        p[0] = 1.0
        return PhotonDistribution(p, 0.0)
    mean, var = _number_stats(spec.k, spec.rho)
    size = max(_n_far(mean, var), n_max + 2)
    p = np.exp(_log_probs(spec.k, spec.rho, size))
    return PhotonDistribution(p[:n_max + 1].copy(), float(np.sum(p[n_max + 1:])))


def fano_factor(dist: PhotonDistribution) -> float:
    return dist.var / dist.mean


def poisson_tv_distance(dist: PhotonDistribution) -> float:
    """Total-variation distance to the Poisson law with the same mean.

    Mass beyond ``n_max`` of either law is counted in full, which makes the
    result an upper bound only by the (tiny) truncated tails.
    """
    mu = dist.mean
    n = np.arange(len(dist.probs))
    log_q = n * math.log(mu) - mu - np.array([log_gamma(j + 1.0) for j in n])
    q = np.exp(log_q)
    return 0.5 * (float(np.sum(np.abs(dist.probs - q))) + dist.tail + max(0.0, 1.0 - float(np.sum(q))))


# ---------------------------------------------------------------------------
# closed-form moments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class K3Moments:
    mean: float
    second: float
    var: float


@dataclass(frozen=True)
class K12Moments:
    mean_K1: float
    mean_K2: float
    var_K1: float
    var_K2: float


def k3_moments(spec: CoherentSpec) -> K3Moments:
    """``<K3>``, ``<K3^2>`` and the variance via ``I_{2k}/I_{2k-1}``."""
    k, rho = spec.k, spec.rho
    r = bessel_i_ratio(2.0 * k - 1.0, 2.0 * rho)
    mean = k + rho * r
    second = k * k + rho * rho + rho * r
    var = rho * rho * (1.0 - r * r) + (1.0 - 2.0 * k) * rho * r
    if abs(var - (second - mean * mean)) > 1e-12 * max(second, 1.0):
        raise ConvergenceError(f"K3 variance inconsistent for k={k}, rho={rho}")
    return K3Moments(mean, second, var)


def k12_moments(spec: CoherentSpec) -> K12Moments:
    """``<K1> = Re z``, ``<K2> = -Im z``; both variances equal ``<K3>/2``."""
    half = 0.5 * k3_moments(spec).mean
    return K12Moments(spec.z.real, -spec.z.imag, half, half)


@dataclass(frozen=True)
class UncertaintyResult:
    lhs: float
    rhs: float
    saturated: bool


def _uncertainty(var1, var2, mean3, rtol=1e-10):
    lhs = var1 * var2
    rhs = 0.25 * mean3 * mean3
    return UncertaintyResult(lhs, rhs, abs(lhs - rhs) <= rtol * rhs)


def uncertainty_check(state, rtol: float = 1e-10) -> UncertaintyResult:
    """Compare ``(dK1)^2 (dK2)^2`` with ``|<K3>|^2 / 4``.

    ``state`` is a :class:`CoherentSpec` (closed forms) or a
    :class:`~phasequant.irrep.StateVector` (matrix quadratic forms). The
    bound is an equality exactly for coherent states.
    """
    if isinstance(state, CoherentSpec):
        m = k12_moments(state)
        return _uncertainty(m.var_K1, m.var_K2, k3_moments(state).mean, rtol)
    if isinstance(state, StateVector):
        # pad by one so every row the state touches is exact
        v = np.concatenate([state.coeffs, [0.0]])
        dim = len(v)
        ops = {kind: build_operator(kind, state.params, dim)
               for kind in (OperatorKind.K1, OperatorKind.K2, OperatorKind.K3)}
        nrm = np.vdot(v, v).real
        out = []
        for kind in (OperatorKind.K1, OperatorKind.K2):
            av = ops[kind].matvec(v)
            mean = np.vdot(v, av).real / nrm
            out.append(np.vdot(av, av).real / nrm - mean * mean)
        mean3 = np.vdot(v, ops[OperatorKind.K3].matvec(v)).real / nrm
        return _uncertainty(out[0], out[1], mean3, rtol)
    raise DomainError(f"cannot check uncertainty for {type(state).__name__}")


# ---------------------------------------------------------------------------
# the g function and phase expectations
# ---------------------------------------------------------------------------

def _g_log_terms(k, rho):
    mean, var = _number_stats(k, rho)
    size = _n_far(mean, var)
    n = np.arange(size)
    log_t = 2.0 * (n + k) * math.log(rho) - _log_factorial_gamma(k, size)
    return log_t, 1.0 / (n + k) + 1.0 / (n + k + 1.0)


def log_g_series(k: float, rho: float) -> float:
    """``ln g(k, rho)`` from the power series, summed in log space."""
    if rho <= 0.0:
        return -math.inf
    log_t, w = _g_log_terms(k, rho)
    return _logsumexp(log_t, w)


def _g_integral(k, rho, epsrel):
    nu = 2.0 * k - 1.0
    upper = 2.0 * rho
    if nu >= 0.0:
        def f0(u):
            return bessel_i(nu, u).value

        def f2(u):
            return u * u * bessel_i(nu, u).value

        a, ea = integrate.quad(f0, 0.0, upper, epsabs=0.0, epsrel=epsrel, limit=200)
        b, eb = integrate.quad(f2, 0.0, upper, epsabs=0.0, epsrel=epsrel, limit=200)
    else:
        # u = s**m with m = 1/(nu+1) removes the u**nu endpoint singularity
        m = 1.0 / (nu + 1.0)

        def h(s):
            if s == 0.0:
                return math.exp(-log_gamma(nu + 1.0)) * 0.5 ** nu
            u = s ** m
            return math.exp(log_bessel_i(nu, u) - nu * math.log(u))

        def f0(s):
            return m * h(s)

        def f2(s):
            return m * s ** (2 * m) * h(s)

        top = upper ** (nu + 1.0)
        a, ea = integrate.quad(f0, 0.0, top, epsabs=0.0, epsrel=epsrel, limit=200)
        b, eb = integrate.quad(f2, 0.0, top, epsabs=0.0, epsrel=epsrel, limit=200)
    scale = 1.0 / (4.0 * rho * rho)
    value = a + scale * b
    err = ea + scale * eb
    if not err <= 10 * epsrel * abs(value):
        raise ConvergenceError(
            f"g integral error estimate {err:.2e} too large (k={k}, rho={rho})")
    return value


def g_function(k: float, rho: float, method: str = "series", epsrel: float = 1e-11) -> float:
    r"""The coherent-state phase function :math:`g^{(k)}(\rho)`.

    ``method="series"``
        :math:`\sum_n \rho^{2(n+k)}/(n!\Gamma(2k+n))\,(1/(n+k) + 1/(n+k+1))`.
    ``method="integral"``
        :math:`\int_0^{2\rho} I_{2k-1}(u)\,du + (4\rho^2)^{-1}\int_0^{2\rho} u^2 I_{2k-1}(u)\,du`
        by adaptive Gauss-Kronrod quadrature.

    Use :func:`g_ratio` when only ``g / I_{2k-1}(2 rho)`` is needed; it
    does not overflow.
    """
    if k <= 0 or not math.isfinite(k):
        raise DomainError(f"k must be > 0, got {k}")
    if rho < 0 or not math.isfinite(rho):
        raise DomainError(f"rho must be finite and >= 0, got {rho}")
    if method == "series":
        if rho == 0.0:
            return 0.0
        lg = log_g_series(k, rho)
        if lg > 709.78:
            raise OverflowError(f"g({k}, {rho}) overflows; use g_ratio")
        return math.exp(lg)
    if method == "integral":
        if rho == 0.0:
            raise DomainError("the integral representation needs rho > 0")
        return _g_integral(k, rho, epsrel)
    raise DomainError(f"unknown method {method!r}")


def g_ratio(k: float, rho: float) -> float:
    """``g(k, rho) / I_{2k-1}(2 rho)``; tends to 2 as ``rho`` grows."""
    if rho == 0.0:
        return 0.0
    return math.exp(log_g_series(k, rho) - log_bessel_i(2.0 * k - 1.0, 2.0 * rho))


@dataclass(frozen=True)
class TrigExpectation:
    mean_cos: float
    mean_sin: float


def trig_expectation(spec: CoherentSpec) -> TrigExpectation:
    """``<cos> = cos(alpha) g/(2 I)`` and ``<sin> = sin(alpha) g/(2 I)``."""
    if spec.rho == 0.0:
        return TrigExpectation(0.0, 0.0)
    half = 0.5 * g_ratio(spec.k, spec.rho)
    a = spec.alpha
    return TrigExpectation(math.cos(a) * half, math.sin(a) * half)


def trig_second_moment(spec: CoherentSpec, dim: int | None = None, which: str = "cos",
                       return_tail: bool = False):
    """``<z|cos^2|z> = sum_n |<k,n|cos|z>|^2`` over the truncated basis.

    The state is padded by one basis vector so that ``cos|z>`` is exact on
    every row that carries weight; the neglected mass is the state's tail.
    """
    kind = {"cos": OperatorKind.COS_PHI, "sin": OperatorKind.SIN_PHI}.get(which)
    if kind is None:
        raise DomainError(f"which must be 'cos' or 'sin', got {which!r}")
    state = coherent_vector(spec, dim)
    v = np.concatenate([state.coeffs, [0.0]])
    w = build_operator(kind, spec.params, len(v)).matvec(v)
    value = float(np.vdot(w, w).real)
    if return_tail:
        return value, state.tail_bound
    return value


# ---------------------------------------------------------------------------
# completeness and overlaps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadConfig:
    """Radial quadrature settings; ``radius=None`` picks ``max(20, 10k + 5n)``."""

    radius: float | None = None
    epsabs: float = 1e-13
    epsrel: float = 1e-11
    limit: int = 400


@dataclass(frozen=True)
class CompletenessResult:
    value: float
    abs_err: float
    tail_bound: float
    radius: float


def _radial_log_prefactor(k, n):
    return math.log(4.0) - log_gamma(n + 1.0) - log_gamma(2.0 * k + n)


def radial_tail_bound(k: float, n: int, radius: float) -> float:
    """Upper bound on the radial integrand's mass beyond ``radius``.

    Uses ``sqrt(x) e^x K_nu(x) <= C`` for ``x >= 2 radius`` with ``C`` the
    larger of its value at ``2 radius`` and its limit ``sqrt(pi/2)``, and
    ``int_R^inf t^b e^{-2t} dt <= R^b e^{-2R} / (2 - b/R)`` when ``b < 2R``.
    """
    nu = abs(2.0 * k - 1.0)
    x = 2.0 * radius
    c = max(math.sqrt(x) * bessel_k(nu, x, scaled=True).value, math.sqrt(math.pi / 2.0))
    b = 2.0 * (n + k) - 0.5
    if b >= 2.0 * radius:
        return math.inf
    log_int = b * math.log(radius) - 2.0 * radius - math.log(2.0 - b / radius)
    return math.exp(_radial_log_prefactor(k, n) + math.log(c / math.sqrt(2.0)) + log_int)


def completeness_integral(k: float, n: int, quad_cfg: QuadConfig | None = None) -> CompletenessResult:
    r"""Diagonal matrix element of the coherent-state resolution of identity.

    The angular integral leaves only the ``n``-th coefficient, so the
    measure :math:`(2/\pi)\rho K_{2k-1}(2\rho) I_{2k-1}(2\rho)` reduces to
    :math:`4\rho^{2(n+k)}K_{2k-1}(2\rho)/(n!\Gamma(2k+n))` on ``(0, radius]``.
    """
    if k <= 0:
        raise DomainError(f"k must be > 0, got {k}")
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n}")
    cfg = quad_cfg or QuadConfig()
    radius = cfg.radius if cfg.radius is not None else max(20.0, 10.0 * k + 5.0 * n)
    nu = abs(2.0 * k - 1.0)
    log_pref = _radial_log_prefactor(k, n)
    power = 2.0 * (n + k)

    def integrand(r):
        if r <= 0.0:
            return 0.0
        x = 2.0 * r
        return math.exp(log_pref + power * math.log(r) - x + math.log(bessel_k(nu, x, scaled=True).value))

    # split where the integrand peaks so the adaptive rule sees both shoulders
    peak = min(max(0.5 * (power + 0.5), 0.5), 0.9 * radius)
    total = 0.0
    err = 0.0
    for lo, hi in ((0.0, peak), (peak, radius)):
        val, e = integrate.quad(integrand, lo, hi, epsabs=cfg.epsabs, epsrel=cfg.epsrel,
                                limit=cfg.limit)
        total += val
        err += e
    if err > max(cfg.epsabs, cfg.epsrel * abs(total)) * 100:
        raise ConvergenceError(f"completeness quadrature error {err:.2e} (k={k}, n={n})")
    return CompletenessResult(total, err, radial_tail_bound(k, n, radius), radius)


def completeness_check(k: float, n: int, quad_cfg: QuadConfig | None = None) -> float:
    """Value of the radial completeness integral; 1 for a complete family."""
    return completeness_integral(k, n, quad_cfg).value


def overlap(spec_a: CoherentSpec, spec_b: CoherentSpec, dim: int | None = None) -> complex:
    """``<z_a|z_b>`` by contracting coefficient vectors."""
    if spec_a.params != spec_b.params:
        raise DomainError("overlap needs both states in the same representation")
    if dim is None:
        dim = max(required_dim(spec_a), required_dim(spec_b))
    a = coherent_vector(spec_a, dim).coeffs
    b = coherent_vector(spec_b, dim).coeffs
    return complex(np.vdot(a, b))


def eigen_residual(spec: CoherentSpec, dim: int | None = None) -> float:
    """``||(K- - z)|z>||`` on rows ``0 .. dim-2`` of the truncated vector.

    The last row is dropped because ``K-`` couples it to the discarded
    component ``n = dim``.
    """
    state = coherent_vector(spec, dim)
    km = build_operator(OperatorKind.KMINUS, spec.params, state.dim)
    r = km.matvec(state.coeffs) - spec.z * state.coeffs
    return float(np.linalg.norm(r[:-1]))
