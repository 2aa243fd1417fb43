r"""Special-function kernel: log-gamma and modified Bessel functions.

Everything here is implemented from scratch on top of :mod:`math`; no
external special-function library is used, so every number produced by the
higher modules can be traced back to this file.

Functions
---------
log_gamma
    :math:`\ln\Gamma(x)` for real :math:`x > 0`.
bessel_i, log_bessel_i
    :math:`I_\nu(x)` for real :math:`\nu > -1`, :math:`x \ge 0`.
bessel_k, bessel_k_reflection
    :math:`K_\nu(x)` for real :math:`\nu \ge 0`, :math:`x > 0`.
bessel_i_ratio
    :math:`I_{\nu+1}(x)/I_\nu(x)` by continued fraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .exceptions import ConvergenceError, DomainError

__all__ = [
    "EvalResult",
    "log_gamma",
    "bessel_i",
    "log_bessel_i",
    "bessel_k",
    "bessel_k_reflection",
    "bessel_i_ratio",
    "SERIES_REL_STOP",
    "SERIES_MAX_TERMS",
]

Method = Literal["series", "asymptotic", "continued_fraction", "reflection"]

EPS = 2.220446049250313e-16
SERIES_REL_STOP = 1e-18
SERIES_MAX_TERMS = 500
I_ASYMPTOTIC_MIN_X = 30.0
INTEGER_ORDER_TOL = 1e-6
EULER_GAMMA = 0.57721566490153286061
HALF_LOG_2PI = 0.91893853320467274178

# zeta(j) - 1 for j = 2, 3, ...
_ZETA_M1 = (
    0.64493406684822643647, 0.2020569031595942854, 0.082323233711138191516,
    0.036927755143369926331, 0.017343061984449139715, 0.0083492773819228268398,
    0.0040773561979443393787, 0.0020083928260822144179, 0.00099457512781808533715,
    0.0004941886041194645587, 0.00024608655330804829864, 0.00012271334757848914675,
    6.1248135058704829259e-5, 3.0588236307020493552e-5, 1.5282259408651871733e-5,
    7.6371976378997622736e-6, 3.8172932649998398565e-6, 1.9082127165539389257e-6,
    9.5396203387279611315e-7, 4.7693298678780646312e-7, 2.3845050272773299e-7,
    1.1921992596531107307e-7, 5.9608189051259479612e-8, 2.9803503514652280186e-8,
    1.4901554828365041235e-8, 7.450711789835429492e-9, 3.7253340247884570548e-9,
    1.8626597235130490064e-9, 9.3132743241966818287e-10, 4.656629065033784073e-10,
)

# Taylor coefficients of 1/Gamma(1 + x) about x = 0
_RGAMMA1P = (
    1.0, 0.57721566490153286061, -0.65587807152025388108, -0.042002635034095235529,
    0.1665386113822914895, -0.042197734555544336748, -0.0096219715278769735621,
    0.0072189432466630995424, -0.0011651675918590651121, -0.00021524167411495097282,
    0.00012805028238811618615, -2.0134854780788238656e-5, -1.2504934821426706573e-6,
    1.1330272319816958824e-6, -2.0563384169776071035e-7, 6.1160951044814158179e-9,
    5.0020076444692229301e-9, -1.1812745704870201446e-9, 1.0434267116911005105e-10,
    7.782263439905071254e-12, -3.6968056186422057082e-12, 5.100370287454475979e-13,
    -2.0583260535665067832e-14, -5.3481225394230179824e-15, 1.2267786282382607902e-15,
    -1.1812593016974587695e-16, 1.1866922547516003326e-18, 1.4123806553180317816e-18,
)

# B_{2j} / (2j (2j - 1)), Stirling correction coefficients
_STIRLING = (
    1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0,
    -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
)


@dataclass(frozen=True)
class EvalResult:
    """A special-function value with an error estimate and the branch used."""

    value: float
    abs_err_estimate: float
    method: Method

    def __float__(self):
        return self.value


def _check_finite(**kwargs):
    for name, val in kwargs.items():
        if not math.isfinite(val):
            raise DomainError(f"{name} must be finite, got {val!r}")


# ---------------------------------------------------------------------------
# log-gamma
# ---------------------------------------------------------------------------

def _lgamma_near_two(e):
    # ln Gamma(2 + e), |e| <= 1/2
    s = (1.0 - EULER_GAMMA) * e
    p = e
    for j, zm1 in enumerate(_ZETA_M1, start=2):
        p *= -e
        term = -zm1 * p / j
        s += term
        if abs(term) < 1e-17 * abs(s):
            break
    return s


def _lgamma_stirling(x):
    s = (x - 0.5) * math.log(x) - x + HALF_LOG_2PI
    inv = 1.0 / x
    inv2 = inv * inv
    p = inv
    for c in _STIRLING:
        s += c * p
        p *= inv2
    return s


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for ``x > 0``.

    Uses the Taylor series of ``ln Gamma`` about 2 on ``[0.5, 2.5]`` (so the
    zeros at 1 and 2 keep full relative accuracy), downward recurrence on
    ``(2.5, 10)`` and Stirling's series beyond.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    if x < 0.5:
        return _lgamma_near_two(x) - math.log1p(x) - math.log(x)
    if x < 1.5:
        return _lgamma_near_two(x - 1.0) - math.log1p(x - 1.0)
    if x <= 2.5:
        return _lgamma_near_two(x - 2.0)
    if x < 10.0:
        prod = 1.0
        y = x
        while y > 2.5:
            y -= 1.0
            prod *= y
        return _lgamma_near_two(y - 2.0) + math.log(prod)
    return _lgamma_stirling(x)


def _rgamma_parts(mu):
    """Return (1/Gamma(1+mu), 1/Gamma(1-mu), gam1, gam2) for |mu| <= 1/2.

    gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu) and
    gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2, both free of cancellation.
    """
    even = 0.0
    odd = 0.0
    p = 1.0
    for j, c in enumerate(_RGAMMA1P):
        if j % 2 == 0:
            even += c * p
        else:
            odd += c * p
        p *= mu
    # odd part is mu * (sum over odd j of c_j mu^(j-1))
    odd_over_mu = 0.0
    p = 1.0
    for c in _RGAMMA1P[1::2]:
        odd_over_mu += c * p
        p *= mu * mu
    return even + odd, even - odd, -odd_over_mu, even


# ---------------------------------------------------------------------------
# modified Bessel function of the first kind
# ---------------------------------------------------------------------------

def _log_i_series(nu, x):
    # ascending series; the running sum is rescaled to stay finite
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    log_scale = 0.0
    n = 0
    while True:
        n += 1
        if n > SERIES_MAX_TERMS:
            raise ConvergenceError(
                f"I_nu series did not converge in {SERIES_MAX_TERMS} terms "
                f"(nu={nu}, x={x})")
        term *= q / (n * (n + nu))
        total += term
        if term < SERIES_REL_STOP * total:
            break
        if total > 1e250:
            total *= 1e-250
            term *= 1e-250
            log_scale += 250.0 * math.log(10.0)
    log_pref = nu * math.log(0.5 * x) - log_gamma(nu + 1.0)
    logval = log_pref + log_scale + math.log(total)
    rel = EPS * (4.0 + math.sqrt(n) + abs(log_pref) + abs(logval))
    return logval, rel, n


def _log_i_asymptotic(nu, x):
    mu4 = 4.0 * nu * nu
    s = 1.0
    term = 1.0
    last = float("inf")
    for j in range(1, SERIES_MAX_TERMS + 1):
        odd = 2 * j - 1
        term *= -(mu4 - odd * odd) / (8.0 * j * x)
        if abs(term) > last:
            # the series is divergent from here on; stop at the smallest term
            break
        s += term
        last = abs(term)
        if abs(term) < SERIES_REL_STOP * abs(s):
            last = abs(term)
            break
    logval = x - 0.5 * math.log(2.0 * math.pi * x) + math.log(s)
    rel = last / abs(s) + EPS * (4.0 + abs(logval))
    return logval, rel


def _i_branch(nu, x):
    return "asymptotic" if x >= max(I_ASYMPTOTIC_MIN_X, 2.0 * nu * nu) else "series"


def _check_i_args(nu, x):
    _check_finite(nu=nu, x=x)
    if nu <= -1.0:
        raise DomainError(f"bessel_i supports orders nu > -1, got {nu}")
    if x < 0.0:
        raise DomainError(f"bessel_i requires x >= 0, got {x}")
    if x == 0.0 and nu < 0.0:
        raise DomainError(f"I_nu(0) is infinite for nu={nu} < 0")


def log_bessel_i(nu: float, x: float, method: Method | None = None) -> float:
    """``ln I_nu(x)`` for ``nu > -1`` and ``x > 0``; never overflows.

    ``method`` forces the ``"series"`` or ``"asymptotic"`` branch, which is
    useful for probing the switch point.
    """
    nu = float(nu)
    x = float(x)
    _check_i_args(nu, x)
    if x == 0.0:
        return 0.0 if nu == 0.0 else -math.inf
    method = method or _i_branch(nu, x)
    if method == "series":
        return _log_i_series(nu, x)[0]
    return _log_i_asymptotic(nu, x)[0]


def bessel_i(nu: float, x: float, scaled: bool = False,
             method: Method | None = None) -> EvalResult:
    r"""Modified Bessel function of the first kind :math:`I_\nu(x)`.

    Parameters
    ----------
    nu : float
        Order, ``nu > -1``. Orders in ``(-1, 0)`` are needed for Bargmann
        indices ``k < 1/2`` (order ``2k - 1``).
    x : float
        Argument, ``x >= 0``.
    scaled : bool
        Return :math:`e^{-x} I_\nu(x)` instead, which never overflows.
    method : {"series", "asymptotic"}, optional
        Force a branch. By default the ascending series is used for
        ``x < max(30, 2 nu**2)`` and the large-argument expansion otherwise.

    Raises
    ------
    DomainError
        For ``nu <= -1``, ``x < 0``, non-finite input, or ``x == 0`` with
        ``nu < 0``.
    OverflowError
        If the unscaled value is not representable; retry with ``scaled=True``.
    """
    nu = float(nu)
    x = float(x)
    _check_i_args(nu, x)
    if x == 0.0:
        return EvalResult(1.0 if nu == 0.0 else 0.0, 0.0, "series")
    method = method or _i_branch(nu, x)
    if method == "series":
        logval, rel, _ = _log_i_series(nu, x)
    elif method == "asymptotic":
        logval, rel = _log_i_asymptotic(nu, x)
    else:
        raise DomainError(f"bessel_i has no {method!r} branch")
    if scaled:
        logval -= x
    if logval > 709.78:
        raise OverflowError(
            f"I_{nu}({x}) overflows double precision; use scaled=True or log_bessel_i")
    value = math.exp(logval)
    return EvalResult(value, rel * value, method)


def bessel_i_ratio(nu: float, x: float) -> float:
    r"""Ratio :math:`I_{\nu+1}(x) / I_\nu(x)` by Gauss's continued fraction.

    Evaluated with the modified Lentz algorithm, so it is overflow-free for
    any ``x``. The result lies in ``[0, 1)`` for ``nu >= -1/2``; for
    ``-1 < nu < -1/2`` it may exceed 1 at large ``x``.
    """
    nu = float(nu)
    x = float(x)
    _check_finite(nu=nu, x=x)
    if nu <= -1.0:
        raise DomainError(f"bessel_i_ratio requires nu > -1, got {nu}")
    if x < 0.0:
        raise DomainError(f"bessel_i_ratio requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    tiny = 1e-300
    # I_{nu+1}/I_nu = 1 / (b1 + 1 / (b2 + 1 / (b3 + ...))), b_j = 2 (nu + j) / x
    b = 2.0 * (nu + 1.0) / x
    f = b if b != 0.0 else tiny
    c = f
    d = 0.0
    max_iter = SERIES_MAX_TERMS + int(10 * x)
    for j in range(2, max_iter + 2):
        b = 2.0 * (nu + j) / x
        d = b + d
        d = 1.0 / (d if d != 0.0 else tiny)
        c = b + 1.0 / c
        if c == 0.0:
            c = tiny
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < EPS:
            return 1.0 / f
    raise ConvergenceError(f"I-ratio continued fraction failed (nu={nu}, x={x})")


# ---------------------------------------------------------------------------
# modified Bessel function of the third kind
# ---------------------------------------------------------------------------

def _k_temme(mu, x):
    # Temme's series for K_mu, K_{mu+1}, |mu| <= 1/2, small x
    x2 = 0.5 * x
    pimu = math.pi * mu
    fact = 1.0 if abs(pimu) < EPS else pimu / math.sin(pimu)
    d = -math.log(x2)
    e = mu * d
    fact2 = 1.0 if abs(e) < EPS else math.sinh(e) / e
    gampl, gammi, gam1, gam2 = _rgamma_parts(mu)
    ff = fact * (gam1 * math.cosh(e) + gam2 * fact2 * d)
    total = ff
    e = math.exp(e)
    p = 0.5 * e / gampl
    q = 0.5 / (e * gammi)
    c = 1.0
    d = x2 * x2
    sum1 = p
    for i in range(1, SERIES_MAX_TERMS + 1):
        ff = (i * ff + p + q) / (i * i - mu * mu)
        c *= d / i
        p /= i - mu
        q /= i + mu
        delta = c * ff
        total += delta
        sum1 += c * (p - i * ff)
        if abs(delta) < SERIES_REL_STOP * abs(total):
            return total, sum1 * 2.0 / x, i
    raise ConvergenceError(f"K_nu series did not converge (mu={mu}, x={x})")


def _k_steed(mu, x):
    # Steed's CF2 for e^x K_mu(x), e^x K_{mu+1}(x)
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25 - mu * mu
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    max_iter = SERIES_MAX_TERMS * 20
    for i in range(1, max_iter + 1):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < EPS:
            kmu = math.sqrt(math.pi / (2.0 * x)) / s
            k1 = kmu * (mu + x + 0.5 - a1 * h) / x
            return kmu, k1, i
    raise ConvergenceError(f"K_nu continued fraction did not converge (mu={mu}, x={x})")


K_CF_MIN_X = 2.0


def bessel_k(nu: float, x: float, scaled: bool = False) -> EvalResult:
    r"""Modified Bessel function of the third kind :math:`K_\nu(x)`.

    The order is split as ``nu = mu + m`` with ``|mu| <= 1/2``. The pair
    :math:`K_\mu, K_{\mu+1}` comes from Temme's series for ``x < 2`` or
    Steed's continued fraction otherwise, then forward recurrence (stable for
    ``K``) lifts it to order ``nu``. Integer and non-integer orders share the
    same path, so there is no cancellation near integers.

    ``scaled=True`` returns :math:`e^{x} K_\nu(x)`.
    """
    nu = float(nu)
    x = float(x)
    _check_finite(nu=nu, x=x)
    if nu < 0.0:
        nu = -nu  # K_{-nu} = K_nu
    if x <= 0.0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    m = int(nu + 0.5)
    mu = nu - m
    if x < K_CF_MIN_X:
        kmu, k1, n_it = _k_temme(mu, x)
        method = "series"
        log_shift = x if scaled else 0.0
    else:
        kmu, k1, n_it = _k_steed(mu, x)
        method = "continued_fraction"
        log_shift = 0.0 if scaled else -x
    for i in range(1, m + 1):
        kmu, k1 = k1, (mu + i) * (2.0 / x) * k1 + kmu
        if not math.isfinite(k1) and i < m:
            raise OverflowError(f"K_{nu}({x}) overflows double precision")
    if not math.isfinite(kmu):
        raise OverflowError(f"K_{nu}({x}) overflows double precision")
    if log_shift:
        if kmu == 0.0:
            value = 0.0
        else:
            logv = math.log(kmu) + log_shift
            if logv > 709.78:
                raise OverflowError(f"K_{nu}({x}) overflows double precision")
            value = math.exp(logv)
    else:
        value = kmu
    rel = EPS * (8.0 + math.sqrt(n_it) + 2.0 * m + abs(log_shift))
    return EvalResult(value, rel * value, method)


def bessel_k_reflection(nu: float, x: float) -> EvalResult:
    r"""``K_nu`` from :math:`\frac{\pi}{2}(I_{-\nu} - I_\nu)/\sin(\nu\pi)`.

    An independent route, valid for non-integer ``0 < nu < 1`` only (the
    kernel's ``I`` accepts orders above -1). It loses roughly ``2x/ln 10``
    digits to cancellation, so it is meant for small ``x`` cross-checks.
    """
    nu = float(nu)
    x = float(x)
    if not 0.0 < nu < 1.0 or min(nu, 1.0 - nu) < INTEGER_ORDER_TOL:
        raise DomainError(f"reflection route needs non-integer 0 < nu < 1, got {nu}")
    if x <= 0.0:
        raise DomainError(f"bessel_k requires x > 0, got {x}")
    a = bessel_i(-nu, x)
    b = bessel_i(nu, x)
    s = math.sin(nu * math.pi)
    value = 0.5 * math.pi * (a.value - b.value) / s
    err = 0.5 * math.pi * (a.abs_err_estimate + b.abs_err_estimate) / abs(s)
    return EvalResult(value, err + EPS * abs(value), "reflection")
