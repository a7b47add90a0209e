from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy import special

from koenigs.errors import DomainError, PoleError
from koenigs.specfun import (
    bessel_i,
    hermite,
    jacobi,
    kummer_m,
    kummer_u,
    laguerre,
    log_gamma,
    orthopoly,
    signed_log_gamma,
    whittaker,
)

finite = dict(allow_nan=False, allow_infinity=False)


@given(st.floats(min_value=0.05, max_value=150.0, **finite))
def test_log_gamma_recurrence(z):
    assert log_gamma(z + 1.0) == pytest.approx(log_gamma(z) + math.log(z), rel=1e-13, abs=1e-13)


@given(st.floats(min_value=0.01, max_value=170.0, **finite))
def test_log_gamma_matches_lgamma(z):
    assert log_gamma(z) == pytest.approx(math.lgamma(z), rel=1e-13, abs=1e-13)


def test_log_gamma_rejects_nonpositive():
    with pytest.raises(DomainError):
        log_gamma(0.0)


@given(st.floats(min_value=-8.0, max_value=8.0, **finite))
def test_signed_log_gamma_on_the_real_axis(x):
    assume(abs(x - round(x)) > 1e-3 or x > 0.5)
    log_abs, sign = signed_log_gamma(x)
    assert sign == special.gammasgn(x)
    assert log_abs == pytest.approx(special.gammaln(x), rel=1e-11, abs=1e-11)


def test_signed_log_gamma_pole():
    with pytest.raises(PoleError):
        signed_log_gamma(-2.0)


@settings(max_examples=60)
@given(
    st.floats(min_value=0.0, max_value=3.0, **finite),
    st.floats(min_value=0.5, max_value=5.0, **finite),
    st.floats(min_value=0.0, max_value=10.0, **finite),
)
def test_kummer_m_matches_scipy(a, b, z):
    result = kummer_m(a, b, z)
    assert result.converged
    assert result.value == pytest.approx(special.hyp1f1(a, b, z), rel=1e-11)


@settings(max_examples=60)
@given(
    st.floats(min_value=-2.0, max_value=3.0, **finite),
    st.floats(min_value=0.5, max_value=5.0, **finite),
    st.floats(min_value=0.1, max_value=8.0, **finite),
)
def test_kummer_derivative_identity(a, b, z):
    h = 1e-5
    derivative = (kummer_m(a, b, z + h).value - kummer_m(a, b, z - h).value) / (2.0 * h)
    expected = a / b * kummer_m(a + 1.0, b + 1.0, z).value
    scale = special.hyp1f1(abs(a) + 1.0, b + 1.0, z) * max(1.0, abs(a)) / b
    assert abs(derivative - expected) <= 1e-6 * scale


def test_kummer_m_terminates_for_negative_integer_a():
    # M(-2, b, z) is a degree-2 polynomial.
    b, z = 1.5, 3.0
    expected = 1.0 - 2.0 * z / b + z * z / (b * (b + 1.0))
    assert kummer_m(-2.0, b, z).value == pytest.approx(expected, rel=1e-14)


def test_kummer_m_outside_window():
    with pytest.raises(DomainError):
        kummer_m(1.0, 2.0, 60.0)


@settings(max_examples=60)
@given(
    st.floats(min_value=0.1, max_value=2.5, **finite),
    st.floats(min_value=0.2, max_value=2.8, **finite),
    st.floats(min_value=0.5, max_value=8.0, **finite),
)
def test_kummer_u_matches_scipy(a, b, z):
    assume(abs(b - round(b)) > 0.05)
    assert kummer_u(a, b, z).value == pytest.approx(special.hyperu(a, b, z), rel=1e-7)


@pytest.mark.parametrize("a, b, z", [(0.7, 2.0, 1.5), (1.3, 3.0, 2.5), (0.4, 1.0, 0.8)])
def test_kummer_u_integer_b(a, b, z):
    assert kummer_u(a, b, z).value == pytest.approx(special.hyperu(a, b, z), rel=1e-6)


def test_kummer_u_closed_form_when_b_is_a_plus_one():
    assert kummer_u(1.7, 2.7, 3.0).value == pytest.approx(3.0**-1.7, rel=1e-15)


@settings(max_examples=60)
@given(st.integers(min_value=0, max_value=16).map(lambda k: k / 4.0), st.floats(min_value=0.1, max_value=30.0, **finite))
def test_whittaker_reduction_at_kappa_mu_plus_half(mu, z):
    expected = z ** (mu + 0.5) * math.exp(-0.5 * z)
    assert whittaker("M", mu + 0.5, mu, z) == pytest.approx(expected, rel=1e-13)
    assert whittaker("W", mu + 0.5, mu, z) == pytest.approx(expected, rel=1e-13)


def test_whittaker_window_and_kind():
    with pytest.raises(DomainError):
        whittaker("M", 0.5, 0.5, 55.0)
    with pytest.raises(ValueError):
        whittaker("Q", 0.5, 0.5, 1.0)


@settings(max_examples=80)
@given(st.floats(min_value=0.0, max_value=20.0, **finite), st.floats(min_value=0.0, max_value=30.0, **finite))
def test_bessel_i_matches_scipy(nu, z):
    assert bessel_i(nu, z) == pytest.approx(special.iv(nu, z), rel=1e-11, abs=1e-300)


@settings(max_examples=60)
@given(st.floats(min_value=1.0, max_value=15.0, **finite), st.floats(min_value=0.1, max_value=25.0, **finite))
def test_bessel_three_term_recurrence(nu, z):
    lhs = bessel_i(nu - 1.0, z) - bessel_i(nu + 1.0, z)
    rhs = 2.0 * nu / z * bessel_i(nu, z)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_bessel_i_at_zero():
    assert bessel_i(0.0, 0.0) == 1.0
    assert bessel_i(2.5, 0.0) == 0.0


def test_bessel_i_window():
    with pytest.raises(DomainError):
        bessel_i(1.0, 61.0)
    with pytest.raises(DomainError):
        bessel_i(101.0, 1.0)


@pytest.mark.parametrize("n", range(0, 11))
@pytest.mark.parametrize("lam", [0.0, 0.5, 2.3])
def test_laguerre_matches_scipy(n, lam):
    x = np.linspace(0.0, 20.0, 41)
    scale = special.eval_genlaguerre(n, lam, -x)
    np.testing.assert_allclose(laguerre(n, lam, x), special.eval_genlaguerre(n, lam, x), rtol=0, atol=1e-12 * scale.max())


@pytest.mark.parametrize("n", range(0, 9))
@pytest.mark.parametrize("a, b", [(0.0, 0.0), (1.0, 1.0), (0.5, 1.5), (2.2, 0.7)])
def test_jacobi_matches_scipy(n, a, b):
    x = np.linspace(-1.0, 1.0, 33)
    scale = max(special.binom(n + a, n), special.binom(n + b, n), 1.0)
    np.testing.assert_allclose(jacobi(n, a, b, x), special.eval_jacobi(n, a, b, x), rtol=0, atol=1e-12 * scale)


@pytest.mark.parametrize("n", range(0, 11))
def test_hermite_matches_scipy(n):
    x = np.linspace(-4.0, 4.0, 33)
    scale = (2.0 * 4.0 + 2.0 * n + 1.0) ** n
    np.testing.assert_allclose(hermite(n, x), special.eval_hermite(n, x), rtol=0, atol=1e-13 * scale)


def test_orthopoly_dispatch_and_scalar_return():
    value = orthopoly("laguerre", 3, 1.2, (0.5,))
    assert isinstance(value, float)
    assert value == pytest.approx(special.eval_genlaguerre(3, 0.5, 1.2), rel=1e-13)
    assert orthopoly("hermite", 4, 0.3) == pytest.approx(special.eval_hermite(4, 0.3), rel=1e-13)
    assert orthopoly("jacobi", 2, 0.1, (0.5, 1.0)) == pytest.approx(special.eval_jacobi(2, 0.5, 1.0, 0.1), rel=1e-13)
    with pytest.raises(ValueError):
        orthopoly("chebyshev", 2, 0.1)


def _mp_hyp1f1(a: float, b: float, z: float) -> float:
    with mpmath.workdps(60):
        return float(mpmath.hyp1f1(a, b, z))


def _mp_hyperu(a: float, b: float, z: float) -> float:
    with mpmath.workdps(60):
        return float(mpmath.hyperu(a, b, z))


def test_kummer_m_negative_argument_closed_form():
    # M(1/2, 3/2, -x) = sqrt(pi) erf(sqrt(x)) / (2 sqrt(x))
    x = 50.0
    expected = math.sqrt(math.pi) * math.erf(math.sqrt(x)) / (2.0 * math.sqrt(x))
    assert kummer_m(0.5, 1.5, -x).value == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("a, b, z", [(2.0, 1.5, -30.0), (0.5, 1.5, -50.0), (-29.5, 1.5, 50.0), (30.0, 0.5, -50.0)])
def test_kummer_m_cancelling_series(a, b, z):
    assert kummer_m(a, b, z).value == pytest.approx(_mp_hyp1f1(a, b, z), rel=1e-10)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=-30.0, max_value=30.0, **finite),
    st.floats(min_value=0.5, max_value=10.0, **finite),
    st.floats(min_value=-50.0, max_value=50.0, **finite),
)
def test_kummer_m_over_the_window(a, b, z):
    result = kummer_m(a, b, z)
    assert result.converged
    assert result.value == pytest.approx(_mp_hyp1f1(a, b, z), rel=1e-10, abs=1e-300)


@pytest.mark.parametrize("a, b, z", [(1.0, 1.5, 45.0), (5.0, 2.5, 50.0), (0.5, 1.3, 20.0), (-12.5, 0.7, 40.0)])
def test_kummer_u_at_large_argument(a, b, z):
    assert kummer_u(a, b, z).value == pytest.approx(_mp_hyperu(a, b, z), rel=1e-8)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(min_value=-30.0, max_value=30.0, **finite),
    st.floats(min_value=0.2, max_value=5.0, **finite),
    st.floats(min_value=0.1, max_value=50.0, **finite),
)
def test_kummer_u_over_the_window(a, b, z):
    assume(abs(b - round(b)) > 0.05)
    assert kummer_u(a, b, z).value == pytest.approx(_mp_hyperu(a, b, z), rel=1e-8, abs=1e-300)


def test_whittaker_w_at_large_argument():
    with mpmath.workdps(60):
        expected = float(mpmath.whitw(0.9, 0.5, 40.0))
    assert whittaker("W", 0.9, 0.5, 40.0) == pytest.approx(expected, rel=1e-8)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=-3.0, max_value=3.0, **finite),
    st.floats(min_value=0.1, max_value=2.0, **finite),
    st.floats(min_value=1.0, max_value=45.0, **finite),
)
def test_whittaker_wronskian(kappa, mu, z):
    assume(abs((0.5 + mu - kappa) - round(0.5 + mu - kappa)) > 0.05 or 0.5 + mu - kappa > 0.5)
    assume(abs(2.0 * mu - round(2.0 * mu)) > 0.05)
    h = 1e-4 * z
    m_value, w_value = whittaker("M", kappa, mu, z), whittaker("W", kappa, mu, z)
    m_slope = (whittaker("M", kappa, mu, z + h) - whittaker("M", kappa, mu, z - h)) / (2.0 * h)
    w_slope = (whittaker("W", kappa, mu, z + h) - whittaker("W", kappa, mu, z - h)) / (2.0 * h)
    log_abs, sign = signed_log_gamma(0.5 + mu - kappa)
    expected = -sign * math.exp(log_gamma(1.0 + 2.0 * mu) - log_abs)
    assert m_value * w_slope - m_slope * w_value == pytest.approx(expected, rel=1e-5)
