from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

from koenigs import radicals
from koenigs.errors import DomainError, NonConvergenceError
from koenigs.models import PolynomialForm, SolverSettings, SpaceKI, SpaceKII, SpaceKIII, make_quantum_numbers
from koenigs.quantize import solve_level
from koenigs.radicals import (
    MATCH_TOLERANCE,
    cross_validate,
    eliminate_radicals,
    poly_real_roots,
    product_real_roots,
)

finite = dict(allow_nan=False, allow_infinity=False)


def _form(*coefficients: float) -> PolynomialForm:
    return PolynomialForm(coefficients=coefficients, declared_degree=len(coefficients) - 1, max_imag_residue=0.0, sample_nodes=())


def test_poly_real_roots_simple():
    roots = poly_real_roots(_form(-1.0, 0.0, 1.0))
    assert [root.value for root in roots] == pytest.approx([-1.0, 1.0], abs=1e-12)
    assert all(root.multiplicity == 1 for root in roots)


def test_poly_real_roots_double_root():
    (root,) = poly_real_roots(_form(1.0, 2.0, 1.0))
    assert root.value == pytest.approx(-1.0, abs=1e-7)
    assert root.multiplicity == 2


def test_poly_real_roots_skips_complex_pairs():
    # (E^2 + 1)(E - 2)
    roots = poly_real_roots(_form(-2.0, 1.0, -2.0, 1.0))
    assert [root.value for root in roots] == pytest.approx([2.0], abs=1e-12)


def test_poly_real_roots_rejects_constants():
    with pytest.raises(DomainError):
        poly_real_roots(_form(3.0))


def test_generic_ki_has_degree_eight():
    spec = SpaceKI(alpha=0.1, beta=0.02, gamma=0.03, delta=1.0, omega=1.0, kx=1.0, ky=1.0)
    form = eliminate_radicals(spec, make_quantum_numbers("K_I", 0, 0))
    assert form.declared_degree == 8
    assert form.max_imag_residue < 1e-8


@pytest.mark.parametrize("qn_pair", [(0, 0), (1, 0), (1, 2)])
def test_curved_ki_roots_match_the_solver(curved_ki, settings, qn_pair):
    qn = make_quantum_numbers("K_I", *qn_pair)
    result = cross_validate(curved_ki, qn, settings)
    assert result.passed
    assert len(result.matched) == 1
    solver_E, polynomial_E = result.matched[0]
    assert polynomial_E == pytest.approx(solver_E, abs=MATCH_TOLERANCE * max(1.0, abs(solver_E)))


def test_curved_ki_ground_level_from_the_polynomial(curved_ki, settings):
    result = cross_validate(curved_ki, make_quantum_numbers("K_I", 0, 0), settings)
    assert result.matched[0][1] == pytest.approx(2.2320919, abs=1e-7)


def test_hydrogen_like_roots_match_the_solver(hydrogen_kiii, settings):
    result = cross_validate(hydrogen_kiii, make_quantum_numbers("K_III", 0, 0), settings)
    assert result.passed
    assert [pair[0] for pair in result.matched] == pytest.approx([-2.0 / 9.0], abs=1e-12)


def test_zero_potential_has_nothing_to_match(settings):
    spec = SpaceKIII(alpha1=1.0, beta=1.0, gamma=1.0, delta=1.0, alpha2=0.0, k1=0.5, k2=0.5)
    result = cross_validate(spec, make_quantum_numbers("K_III", 0, 0), settings)
    assert result.passed
    assert result.matched == ()


def test_generic_kiii_has_degree_eight():
    spec = SpaceKIII(alpha1=0.05, beta=0.02, gamma=0.03, delta=1.0, alpha2=1.0, k1=0.5, k2=0.5)
    form = eliminate_radicals(spec, make_quantum_numbers("K_III", 0, 0))
    assert form.declared_degree == 8


@pytest.mark.parametrize("qn_pair", [(0, 0), (1, 1), (2, 0)])
def test_kii_roots_match_the_solver(flat_kii, settings, qn_pair):
    result = cross_validate(flat_kii, make_quantum_numbers("K_II", *qn_pair), settings)
    assert result.passed
    assert 1 <= result.polynomial.declared_degree <= 10
    assert len(result.matched) == 1


@hyp_settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=0.01, max_value=0.2, **finite),
    st.floats(min_value=0.005, max_value=0.05, **finite),
    st.floats(min_value=0.5, max_value=2.0, **finite),
    st.floats(min_value=0.5, max_value=1.5, **finite),
    st.floats(min_value=0.1, max_value=1.0, **finite),
    st.floats(min_value=0.1, max_value=1.0, **finite),
)
def test_ki_solver_levels_are_polynomial_roots(alpha, beta, delta, omega, kx, ky):
    spec = SpaceKI(alpha=alpha, beta=beta, gamma=beta, delta=delta, omega=omega, kx=kx, ky=ky)
    result = cross_validate(spec, make_quantum_numbers("K_I", 0, 0), SolverSettings())
    assert result.passed
    assert result.polynomial.declared_degree == 8


@hyp_settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=0.01, max_value=0.2, **finite),
    st.floats(min_value=0.005, max_value=0.05, **finite),
    st.floats(min_value=0.005, max_value=0.05, **finite),
    st.floats(min_value=0.5, max_value=2.0, **finite),
    st.floats(min_value=0.5, max_value=2.0, **finite),
    st.floats(min_value=0.1, max_value=1.0, **finite),
)
def test_kiii_solver_levels_are_polynomial_roots(alpha1, beta, gamma, delta, alpha2, k):
    spec = SpaceKIII(alpha1=alpha1, beta=beta, gamma=gamma, delta=delta, alpha2=alpha2, k1=k, k2=2.0 * k)
    result = cross_validate(spec, make_quantum_numbers("K_III", 0, 0), SolverSettings())
    assert result.passed
    assert len(result.matched) >= 1


def test_poly_real_roots_skips_near_axis_complex_pairs():
    assert poly_real_roots(_form(1e-10, 0.0, 1.0)) == []


def test_poly_real_roots_falls_back_to_companion_roots(monkeypatch):
    def stalled(coefficients):
        raise NonConvergenceError("Aberth iteration did not converge.")

    monkeypatch.setattr(radicals, "_aberth", stalled)
    roots = poly_real_roots(_form(-2.0, 1.0, -2.0, 1.0))
    assert [root.value for root in roots] == pytest.approx([2.0], abs=1e-12)


def test_product_roots_include_the_solver_levels(curved_ki, settings):
    qn = make_quantum_numbers("K_I", 1, 0)
    (level,) = solve_level(curved_ki, qn, settings)
    form = eliminate_radicals(curved_ki, qn, 2.0 * max(1.0, abs(level.E)))
    roots = product_real_roots(curved_ki, qn, form)
    assert min(abs(E - level.E) for E in roots) <= MATCH_TOLERANCE * max(1.0, abs(level.E))


def _random_draw(space: str, seed: int):
    rng = np.random.default_rng(seed)
    a, b, c, d, e, f = rng.uniform(0.0, 1.0, size=6)
    delta = float(rng.uniform(0.5, 2.0))
    n1, n2 = (int(n) for n in rng.integers(0, 3, size=2))
    if space == "K_I":
        spec = SpaceKI(alpha=a, beta=b, gamma=c, delta=delta, omega=d, kx=e, ky=f)
    elif space == "K_II":
        spec = SpaceKII(alpha=a, beta=b, gamma=c, delta=delta, omega=d, kx=e, ky_lin=f)
    else:
        spec = SpaceKIII(alpha1=a, beta=b, gamma=c, delta=delta, alpha2=d, k1=e, k2=f)
    return spec, make_quantum_numbers(space, n1, n2)


@pytest.mark.parametrize("seed", range(100))
@pytest.mark.parametrize("space", ["K_I", "K_II", "K_III"])
def test_random_draws_have_every_level_among_the_roots(space, seed):
    spec, qn = _random_draw(space, seed)
    result = cross_validate(spec, qn, SolverSettings())
    assert result.passed
