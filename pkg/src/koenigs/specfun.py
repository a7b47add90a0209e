"""Special functions used by the spectral, wavefunction and Green-function code.

Everything here is evaluated from ascending series or three-term recurrences
inside a declared accuracy window; calls outside the window raise
``DomainError`` instead of returning degraded values.

Series whose partial sums cancel are summed again in mpmath at a working
precision that covers the digits lost; ``NonConvergenceError`` is raised when
the largest precision still cannot.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath
import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError, NonConvergenceError, PoleError

Z_WINDOW = 50.0
BESSEL_Z_WINDOW = 60.0
BESSEL_NU_WINDOW = 100.0
SERIES_TERMS_MAX = 500
INTEGER_B_GAP = 1e-6
FLOAT_DIGITS_LOST = 3.0
EXTENDED_DPS = (40, 80, 160)
RETAINED_DIGITS = 17

_EPS = sys.float_info.epsilon
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    converged: bool


def log_gamma(z: float) -> float:
    """ln Gamma(z) for z > 0 (Lanczos, g=7)."""
    if not z > 0.0:
        raise DomainError(f"log_gamma requires z > 0, got {z}")
    if z < 0.5:
        return math.log(math.pi / math.sin(math.pi * z)) - log_gamma(1.0 - z)
    z -= 1.0
    series = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        series += _LANCZOS_COEFFS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(series)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def signed_log_gamma(x: float) -> tuple[float, float]:
    """(ln|Gamma(x)|, sign Gamma(x)) on the whole real axis via reflection."""
    if x > 0.0:
        return log_gamma(x), 1.0
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at {x}")
    s = math.sin(math.pi * x)
    return math.log(math.pi) - math.log(abs(s)) - log_gamma(1.0 - x), math.copysign(1.0, s)


def _log_reciprocal_gamma(x: float) -> Optional[tuple[float, float]]:
    # None marks 1/Gamma(x) == 0.
    if _is_nonpositive_integer(x):
        return None
    log_abs, sign = signed_log_gamma(x)
    return -log_abs, sign


def _digits_lost(peak, total) -> float:
    if total == 0:
        return math.inf
    return float(mpmath.log10(peak) - mpmath.log10(abs(total)))


def _m_series(a, b, z, terms_max: int, unit, tolerance):
    """Partial sums of M(a, b, z) in the arithmetic of ``unit``: (total, largest term, terms)."""
    total = unit
    term = unit
    peak = abs(unit)
    # Past n = -b the denominators change sign and terms can grow again.
    min_terms = int(-b) + 2 if b < 0 else 0
    for n in range(terms_max):
        term *= (a + n) / (b + n) * z / (n + 1)
        total += term
        peak = max(peak, abs(term))
        if term == 0:
            return total, peak, n + 1
        if n + 1 > min_terms and abs(term) <= tolerance * abs(total):
            next_ratio = abs((a + n + 1) / (b + n + 1) * z / (n + 2))
            if next_ratio < 1:
                return total, peak, n + 1
    raise NonConvergenceError(f"kummer_m({a}, {b}, {z}) did not converge in {terms_max} terms")


def kummer_m(a: float, b: float, z: float, terms_max: int = SERIES_TERMS_MAX) -> SeriesResult:
    if abs(z) > Z_WINDOW:
        raise DomainError(f"kummer_m is limited to |z| <= {Z_WINDOW}, got {z}")
    if _is_nonpositive_integer(b):
        raise DomainError(f"kummer_m requires b not a nonpositive integer, got {b}")
    if z < 0.0:
        # M(a, b, z) = e^z M(b - a, b, -z)
        reflected = kummer_m(b - a, b, -z, terms_max)
        return SeriesResult(math.exp(z) * reflected.value, reflected.terms_used, reflected.converged)
    total, peak, terms = _m_series(a, b, z, terms_max, 1.0, _EPS)
    if _digits_lost(peak, total) <= FLOAT_DIGITS_LOST:
        return SeriesResult(total, terms, True)
    for dps in EXTENDED_DPS:
        with mpmath.workdps(dps):
            tolerance = mpmath.mpf(10) ** -(RETAINED_DIGITS + 4)
            total, peak, terms = _m_series(
                mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(z), terms_max, mpmath.mpf(1), tolerance
            )
            if _digits_lost(peak, total) <= dps - RETAINED_DIGITS:
                return SeriesResult(float(total), terms, True)
    raise NonConvergenceError(f"kummer_m({a}, {b}, {z}) cancels beyond {EXTENDED_DPS[-1]} digits")


def kummer_u(a: float, b: float, z: float, terms_max: int = SERIES_TERMS_MAX) -> SeriesResult:
    if not z > 0.0:
        raise DomainError(f"kummer_u requires z > 0, got {z}")
    if z > Z_WINDOW:
        raise DomainError(f"kummer_u is limited to z <= {Z_WINDOW}, got {z}")
    if b == a + 1.0:
        return SeriesResult(z ** (-a), 0, True)
    nearest = float(round(b))
    if abs(b - nearest) < INTEGER_B_GAP:
        lower = _kummer_u_connection(a, nearest - INTEGER_B_GAP, z, terms_max)
        upper = _kummer_u_connection(a, nearest + INTEGER_B_GAP, z, terms_max)
        return SeriesResult(
            0.5 * (lower.value + upper.value),
            lower.terms_used + upper.terms_used,
            lower.converged and upper.converged,
        )
    return _kummer_u_connection(a, b, z, terms_max)


def _kummer_u_connection(a: float, b: float, z: float, terms_max: int) -> SeriesResult:
    terms = 0
    parts: list[float] = []
    reciprocal = _log_reciprocal_gamma(a - b + 1.0)
    if reciprocal is not None:
        log_num, sign_num = signed_log_gamma(1.0 - b)
        series = kummer_m(a, b, z, terms_max)
        terms += series.terms_used
        parts.append(sign_num * reciprocal[1] * _safe_exp(log_num + reciprocal[0]) * series.value)
    reciprocal = _log_reciprocal_gamma(a)
    if reciprocal is not None:
        log_num, sign_num = signed_log_gamma(b - 1.0)
        series = kummer_m(a - b + 1.0, 2.0 - b, z, terms_max)
        terms += series.terms_used
        log_factor = log_num + reciprocal[0] + (1.0 - b) * math.log(z)
        parts.append(sign_num * reciprocal[1] * _safe_exp(log_factor) * series.value)
    value = math.fsum(parts)
    if _digits_lost(sum(abs(p) for p in parts), value) <= FLOAT_DIGITS_LOST:
        return SeriesResult(value, terms, True)
    return _kummer_u_extended(a, b, z, terms_max)


def _kummer_u_extended(a: float, b: float, z: float, terms_max: int) -> SeriesResult:
    for dps in EXTENDED_DPS:
        with mpmath.workdps(dps):
            tolerance = mpmath.mpf(10) ** -(RETAINED_DIGITS + 4)
            a_mp, b_mp, z_mp = mpmath.mpf(a), mpmath.mpf(b), mpmath.mpf(z)
            one = mpmath.mpf(1)
            parts = []
            lost = 0.0
            terms = 0
            if not _is_nonpositive_integer(a - b + 1.0):
                total, peak, used = _m_series(a_mp, b_mp, z_mp, terms_max, one, tolerance)
                parts.append(mpmath.gamma(1 - b_mp) * mpmath.rgamma(a_mp - b_mp + 1) * total)
                lost, terms = max(lost, _digits_lost(peak, total)), terms + used
            if not _is_nonpositive_integer(a):
                total, peak, used = _m_series(a_mp - b_mp + 1, 2 - b_mp, z_mp, terms_max, one, tolerance)
                parts.append(mpmath.gamma(b_mp - 1) * mpmath.rgamma(a_mp) * z_mp ** (1 - b_mp) * total)
                lost, terms = max(lost, _digits_lost(peak, total)), terms + used
            value = mpmath.fsum(parts)
            lost += _digits_lost(mpmath.fsum(abs(p) for p in parts), value)
            if lost <= dps - RETAINED_DIGITS:
                return SeriesResult(float(value), terms, True)
    raise NonConvergenceError(f"kummer_u({a}, {b}, {z}) cancels beyond {EXTENDED_DPS[-1]} digits")


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError as exc:
        raise DomainError("parameters outside the accuracy window (overflow)") from exc


def whittaker(kind: str, kappa: float, mu: float, z: float, terms_max: int = SERIES_TERMS_MAX) -> float:
    if not 0.0 < z <= Z_WINDOW:
        raise DomainError(f"whittaker requires 0 < z <= {Z_WINDOW}, got {z}")
    a = mu - kappa + 0.5
    b = 1.0 + 2.0 * mu
    if kind == "M":
        if _is_nonpositive_integer(b):
            raise DomainError("Whittaker M requires 1+2mu not a nonpositive integer")
        series = kummer_m(a, b, z, terms_max)
    elif kind == "W":
        series = kummer_u(a, b, z, terms_max)
    else:
        raise ValueError(f"Unknown Whittaker kind: {kind}")
    return _safe_exp(-0.5 * z + (mu + 0.5) * math.log(z)) * series.value


def bessel_i(nu: float, z: float, terms_max: int = SERIES_TERMS_MAX) -> float:
    if not 0.0 <= nu <= BESSEL_NU_WINDOW:
        raise DomainError(f"bessel_i requires 0 <= nu <= {BESSEL_NU_WINDOW}, got {nu}")
    if not 0.0 <= z <= BESSEL_Z_WINDOW:
        raise DomainError(f"bessel_i requires 0 <= z <= {BESSEL_Z_WINDOW}, got {z}")
    if z == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    q = 0.25 * z * z
    total = 1.0
    term = 1.0
    for k in range(1, terms_max + 1):
        term *= q / (k * (nu + k))
        total += term
        if k * k > q and term <= _EPS * total:
            return _safe_exp(nu * math.log(0.5 * z) - log_gamma(nu + 1.0)) * total
    raise NonConvergenceError(f"bessel_i({nu}, {z}) did not converge in {terms_max} terms")


def orthopoly(family: str, n: int, x: ArrayLike, params: Sequence[float] = ()) -> NDArray[np.float64] | float:
    if family == "laguerre":
        return laguerre(n, params[0] if params else 0.0, x)
    if family == "jacobi":
        a, b = params if params else (0.0, 0.0)
        return jacobi(n, a, b, x)
    if family == "hermite":
        return hermite(n, x)
    raise ValueError(f"Unknown polynomial family: {family}")


def _as_result(values: NDArray[np.float64], x: ArrayLike):
    return float(values) if np.ndim(x) == 0 else values


def laguerre(n: int, lam: float, x: ArrayLike):
    if n < 0:
        raise DomainError("polynomial degree must be nonnegative")
    if not lam > -1.0:
        raise DomainError(f"Laguerre parameter must exceed -1, got {lam}")
    x_arr = np.asarray(x, dtype=float)
    previous = np.ones_like(x_arr)
    if n == 0:
        return _as_result(previous, x)
    current = 1.0 + lam - x_arr
    for k in range(1, n):
        previous, current = current, ((2 * k + 1 + lam - x_arr) * current - (k + lam) * previous) / (k + 1)
    return _as_result(current, x)


def jacobi(n: int, a: float, b: float, x: ArrayLike):
    if n < 0:
        raise DomainError("polynomial degree must be nonnegative")
    if not (a > -1.0 and b > -1.0):
        raise DomainError(f"Jacobi parameters must exceed -1, got ({a}, {b})")
    x_arr = np.asarray(x, dtype=float)
    previous = np.ones_like(x_arr)
    if n == 0:
        return _as_result(previous, x)
    current = (a + 1.0) + 0.5 * (a + b + 2.0) * (x_arr - 1.0)
    for k in range(2, n + 1):
        s = 2 * k + a + b
        c1 = 2.0 * k * (k + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * x_arr + a * a - b * b)
        c3 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        previous, current = current, (c2 * current - c3 * previous) / c1
    return _as_result(current, x)


def hermite(n: int, x: ArrayLike):
    if n < 0:
        raise DomainError("polynomial degree must be nonnegative")
    x_arr = np.asarray(x, dtype=float)
    previous = np.ones_like(x_arr)
    if n == 0:
        return _as_result(previous, x)
    current = 2.0 * x_arr
    for k in range(1, n):
        previous, current = current, 2.0 * x_arr * current - 2.0 * k * previous
    return _as_result(current, x)
