from __future__ import annotations

import math

import numpy as np
import pytest

from koenigs.errors import DomainError, GridMismatchError, WindowTooSmallError
from koenigs.models import Window
from koenigs.quadrature import composite_gauss_legendre
from koenigs.quantize import enumerate_spectrum
from koenigs.wavefun import (
    CARTESIAN,
    POLAR,
    angular_pt,
    assemble_and_normalize,
    make_grid,
    overlap,
    radial_basis,
)

WIDE = Window(-12.0, 12.0, -12.0, 12.0)


@pytest.mark.parametrize("a, b", [(0.5, 0.5), (0.0, 1.5), (2.3, 0.7)])
def test_angular_states_are_orthonormal(a, b):
    rule = composite_gauss_legendre(0.0, 0.5 * math.pi, 256)
    states = [angular_pt(n, a, b, rule.nodes) for n in range(4)]
    gram = np.array([[rule.integrate(u * v) for v in states] for u in states])
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-10)


@pytest.mark.parametrize("lam", [0.0, 1.0, 2.5])
def test_radial_oscillator_states_are_orthonormal(lam):
    rule = composite_gauss_legendre(0.0, 12.0, 512)
    states = [radial_basis("rho", n, {"lam": lam, "s": 1.0}, rule.nodes) for n in range(4)]
    gram = np.array([[rule.integrate(u * v) for v in states] for u in states])
    np.testing.assert_allclose(gram, np.eye(4), atol=1e-10)


def test_shifted_oscillator_is_normalized():
    rule = composite_gauss_legendre(-10.0, 10.0, 512)
    params = {"omega_tilde": 0.8, "centre": 0.3}
    for n in range(4):
        psi = radial_basis("shifted_ho", n, params, rule.nodes)
        assert rule.integrate(psi * psi) == pytest.approx(1.0, abs=1e-10)


def test_basis_argument_errors():
    with pytest.raises(DomainError):
        angular_pt(0, 0.5, 0.5, 0.0)
    with pytest.raises(DomainError):
        angular_pt(0, -0.7, 0.5, 0.3)
    with pytest.raises(DomainError):
        radial_basis("rho", -1, {"lam": 0.0, "s": 1.0}, 1.0)
    with pytest.raises(ValueError):
        radial_basis("spherical", 0, {}, 1.0)


def test_grid_kinds(flat_ki, flat_kii, hydrogen_kiii, wide_window):
    assert make_grid(flat_ki, wide_window, 64, 32).kind == POLAR
    assert make_grid(hydrogen_kiii, wide_window, 64, 32).axis2.nodes.max() < math.pi
    grid = make_grid(flat_kii, wide_window, 64, 32)
    assert grid.kind == CARTESIAN
    assert grid.axis1.nodes.min() > 0.0
    with pytest.raises(DomainError):
        make_grid(flat_kii, Window(-4.0, 0.0, -1.0, 1.0), 64, 32)


def test_flat_ki_ground_state_needs_no_rescaling(flat_ki, settings, wide_window):
    level = enumerate_spectrum(flat_ki, 0, settings).levels[0]
    state = assemble_and_normalize(flat_ki, level, wide_window, settings)
    assert state.norm_estimate == pytest.approx(1.0, abs=1e-12)
    assert state.scale == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize(
    "spec_name, window",
    [
        ("curved_ki", WIDE),
        ("flat_kii", Window(0.0, 8.0, -8.0, 8.0)),
        ("hydrogen_kiii", Window(-120.0, 120.0, -120.0, 120.0)),
    ],
)
def test_states_are_normalized_against_the_metric(request, settings, spec_name, window):
    spec = request.getfixturevalue(spec_name)
    for level in enumerate_spectrum(spec, 1, settings).levels:
        state = assemble_and_normalize(spec, level, window, settings)
        assert state.norm_estimate == pytest.approx(1.0, abs=1e-10)
        assert np.all(np.isfinite(state.values))


def test_curved_ki_states_are_orthonormal(curved_ki, settings):
    levels = enumerate_spectrum(curved_ki, 2, settings).levels[:6]
    grid = make_grid(curved_ki, WIDE, 256, 256)
    states = [assemble_and_normalize(curved_ki, level, grid, settings) for level in levels]
    gram = np.array([[overlap(u, v, curved_ki) for v in states] for u in states])
    np.testing.assert_allclose(gram, np.eye(6), atol=1e-6)


def test_overlap_rejects_different_grids(flat_ki, settings, wide_window):
    level = enumerate_spectrum(flat_ki, 0, settings).levels[0]
    coarse = assemble_and_normalize(flat_ki, level, make_grid(flat_ki, wide_window, 128, 64), settings)
    fine = assemble_and_normalize(flat_ki, level, make_grid(flat_ki, wide_window, 256, 64), settings)
    with pytest.raises(GridMismatchError):
        overlap(coarse, fine, flat_ki)


def test_window_too_small(flat_ki, settings):
    level = enumerate_spectrum(flat_ki, 0, settings).levels[0]
    with pytest.raises(WindowTooSmallError):
        assemble_and_normalize(flat_ki, level, Window(-1.0, 1.0, -1.0, 1.0), settings)
