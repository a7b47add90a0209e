"""Radical elimination of the quantization conditions and real polynomial roots.

The conjugate product over every sign branch of the square roots in F(E) is a
polynomial in E. It is sampled at Chebyshev nodes with complex square roots
and fitted. The fitted roots seed a search on the product itself, whose real
roots are compared against the bracketing solver.
"""
from __future__ import annotations

import logging
import math
import sys
from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P
from numpy.typing import NDArray

from .errors import DegeneracyError, DomainError, NonConvergenceError, VerificationFailure
from .models import (
    PolynomialForm,
    PolynomialRoot,
    QuantumNumbers,
    SolverSettings,
    SpaceKI,
    SpaceKII,
    SpaceSpec,
)
from .quantize import check_matching, condition_value, solve_level
from .spaces import in_physical_domain, linear_radicands, physical_energy_domain

DEGREE_NODES = 13
MAX_DEGREE = 10
SIGNIFICANCE = 1e-9
ROOT_RESIDUAL = 1e-8
CLUSTER_GAP = 1e-7
MERGE_GAP = 1e-9
MATCH_TOLERANCE = 1e-8
ABERTH_MAX_ITER = 500
POLISH_MAX_ITER = 60
POLISH_STEP = 1e-7
POLISH_LIMIT = 1e-4
REAL_AXIS_NOISE = 64.0 * sys.float_info.epsilon
NEAR_AXIS = 1e-3
CLUSTER_REACH = 0.05
PRODUCT_GRID = 2049
BISECTION_STEPS = 200

_EPS = sys.float_info.epsilon
_SIGNS = (1.0, -1.0)


def chebyshev_nodes(count: int) -> NDArray[np.float64]:
    k = np.arange(count)
    return np.cos(np.pi * (2 * k + 1) / (2 * count))[::-1]


def conjugate_product(spec: SpaceSpec, qn: QuantumNumbers, energies: NDArray[np.float64]) -> NDArray[np.complex128]:
    E = np.asarray(energies, dtype=complex)
    m, hbar = spec.constants.m, spec.constants.hbar
    radicand = {r.name: r.a + r.b * E for r in linear_radicands(spec)}
    root = {name: np.sqrt(value) for name, value in radicand.items()}
    total = np.ones_like(E)
    if isinstance(spec, SpaceKI):
        for s1, s2, s3 in product(_SIGNS, repeat=3):
            total *= spec.delta * E - hbar * s1 * root["omega_tilde_sq"] * (
                2.0 * qn.N + s2 * root["kx_tilde_sq"] + s3 * root["ky_tilde_sq"]
            )
    elif isinstance(spec, SpaceKII):
        # F multiplied through by 8 m omega_tilde^2.
        A = radicand["omega_tilde_sq"]
        for s1, s2 in product(_SIGNS, repeat=2):
            total *= (
                8.0 * m * A * spec.delta * E
                - (spec.ky_lin - spec.gamma * E) ** 2
                - 8.0 * m * hbar * A * s1 * root["omega_tilde_sq"] * (qn.N + s2 * root["kx_tilde_sq"])
            )
    else:
        # F multiplied through by sqrt(-2 delta E / m).
        S = np.sqrt(2.0 * radicand["minus_delta_E"] / m)
        for s1, s2, s3 in product(_SIGNS, repeat=3):
            total *= (spec.alpha2 - spec.alpha1 * E) / hbar - s1 * S * (
                qn.N + 0.5 * s2 * root["kx_tilde_sq"] + 0.5 * s3 * root["ky_tilde_sq"]
            )
    return total


def sample_radius(spec: SpaceSpec, qn: QuantumNumbers) -> float:
    m, hbar = spec.constants.m, spec.constants.hbar
    delta = abs(spec.delta)
    scales = [1.0]
    for interval in physical_energy_domain(spec):
        scales += [abs(v) for v in (interval.lo, interval.hi) if math.isfinite(v)]
    if isinstance(spec, SpaceKI):
        scales.append(hbar * spec.omega * (2.0 * qn.N + spec.kx + spec.ky + 1.0) / delta)
    elif isinstance(spec, SpaceKII):
        scales.append(hbar * spec.omega * (qn.N + spec.kx) / delta)
        if spec.omega > 0.0:
            scales.append(spec.ky_lin**2 / (8.0 * m * delta * spec.omega**2))
    else:
        scales.append(m * spec.alpha2**2 / (2.0 * delta * hbar**2))
        stiffness = max(spec.alpha1**2 / (2.0 * delta), abs(spec.beta), abs(spec.gamma))
        if stiffness > 0.0:
            scales.append((qn.N * hbar) ** 2 / (m * stiffness))
    return 2.0 * max(scales)


def eliminate_radicals(spec: SpaceSpec, qn: QuantumNumbers, fit_radius: Optional[float] = None) -> PolynomialForm:
    """Degree is read off at the domain-covering radius; coefficients are fitted at fit_radius when given."""
    check_matching(spec, qn)
    radius = sample_radius(spec, qn)

    degree_nodes = chebyshev_nodes(DEGREE_NODES)
    values = conjugate_product(spec, qn, radius * degree_nodes)
    scale = float(np.max(np.abs(values.real)))
    if not scale > 0.0 or not math.isfinite(scale):
        raise DegeneracyError(f"{spec.space} qn={qn.pair}: conjugate product vanishes identically.")
    series = C.chebfit(degree_nodes, values.real / scale, DEGREE_NODES - 1)
    significant = np.nonzero(np.abs(series) > SIGNIFICANCE * np.max(np.abs(series)))[0]
    degree = int(significant[-1])
    if degree > MAX_DEGREE:
        raise DegeneracyError(f"{spec.space} qn={qn.pair}: eliminated polynomial has degree {degree} > {MAX_DEGREE}.")
    if degree < 1:
        raise DegeneracyError(f"{spec.space} qn={qn.pair}: eliminated polynomial is constant in E.")

    if fit_radius is not None:
        radius = fit_radius
    nodes = chebyshev_nodes(degree + 3)
    values = conjugate_product(spec, qn, radius * nodes)
    scale = float(np.max(np.abs(values.real)))
    series = C.chebfit(nodes, values.real / scale, degree)
    coefficients = C.cheb2poly(series) / radius ** np.arange(degree + 1)
    coefficients = coefficients / np.max(np.abs(coefficients))
    return PolynomialForm(
        coefficients=tuple(float(c) for c in coefficients),
        declared_degree=degree,
        max_imag_residue=float(np.max(np.abs(values.imag)) / scale),
        sample_nodes=tuple(float(x) for x in radius * nodes),
    )


def poly_real_roots(p: PolynomialForm) -> list[PolynomialRoot]:
    """Real roots with multiplicity; a root counts as real when its imaginary part fits rounding noise."""
    coefficients = np.trim_zeros(np.asarray(p.coefficients, dtype=float), "b")
    degree = len(coefficients) - 1
    if degree < 1:
        raise DomainError("poly_real_roots needs a polynomial of degree >= 1.")
    size = float(np.max(np.abs(coefficients)))

    all_roots = _all_roots(coefficients)
    candidates = []
    for z in all_roots:
        r = float(z.real)
        scale = max(1.0, abs(r))
        if abs(z.imag) > _real_axis_tolerance(all_roots, z, scale):
            continue
        limit = ROOT_RESIDUAL * size * scale**degree
        if abs(P.polyval(r, coefficients)) < limit:
            candidates.append(r)
    candidates.sort()

    clusters: list[list[float]] = []
    for r in candidates:
        if clusters and r - clusters[-1][-1] <= CLUSTER_GAP * max(1.0, abs(r)):
            clusters[-1].append(r)
        else:
            clusters.append([r])

    roots: list[PolynomialRoot] = []
    for cluster in clusters:
        centre = _refine(coefficients, float(np.mean(cluster)), len(cluster))
        if roots and abs(centre - roots[-1].value) <= MERGE_GAP * max(1.0, abs(centre)):
            merged = roots.pop()
            roots.append(PolynomialRoot(merged.value, merged.multiplicity + len(cluster)))
        else:
            roots.append(PolynomialRoot(centre, len(cluster)))
    return roots


def _real_axis_tolerance(all_roots: NDArray[np.complex128], z: complex, scale: float) -> float:
    # An m-fold root under rounding noise spreads to about noise**(1/m).
    for multiplicity in range(len(all_roots), 1, -1):
        radius = 2.0 * REAL_AXIS_NOISE ** (1.0 / multiplicity) * scale
        if np.count_nonzero(np.abs(all_roots - z) <= radius) >= multiplicity:
            return radius
    return 2.0 * REAL_AXIS_NOISE * scale


def _all_roots(coefficients: NDArray[np.float64]) -> NDArray[np.complex128]:
    try:
        return _aberth(coefficients)
    except NonConvergenceError as exc:
        logging.warning(f"{exc} Falling back to companion-matrix roots.")
        return np.asarray(np.roots(coefficients[::-1]), dtype=complex)


def _fujiwara_bound(coefficients: NDArray[np.float64]) -> float:
    degree = len(coefficients) - 1
    monic = np.abs(coefficients / coefficients[-1])
    terms = [monic[degree - k] ** (1.0 / k) for k in range(1, degree)]
    terms.append((0.5 * monic[0]) ** (1.0 / degree))
    return 2.0 * max(terms)


def _aberth(coefficients: NDArray[np.float64]) -> NDArray[np.complex128]:
    degree = len(coefficients) - 1
    derivative = P.polyder(coefficients)
    radius = max(_fujiwara_bound(coefficients), _EPS)
    z = radius * np.exp(1j * (2.0 * np.pi * np.arange(degree) / degree + 0.4))
    step = np.zeros_like(z)
    for _ in range(ABERTH_MAX_ITER):
        value = P.polyval(z, coefficients)
        slope = P.polyval(z, derivative)
        ratio = np.where(slope != 0.0, value / np.where(slope != 0.0, slope, 1.0), value)
        gaps = z[:, None] - z[None, :]
        np.fill_diagonal(gaps, 1.0)
        repulsion = 1.0 / gaps
        np.fill_diagonal(repulsion, 0.0)
        step = ratio / (1.0 - ratio * repulsion.sum(axis=1))
        z = z - step
        if np.all(np.abs(step) <= 4.0 * _EPS * np.maximum(1.0, np.abs(z))):
            return z
    # Multiple roots stall at rounding noise; only a large last step is a real failure.
    if np.max(np.abs(step) / np.maximum(1.0, np.abs(z))) > 1e-6:
        raise NonConvergenceError("Aberth iteration did not converge.")
    return z


def _refine(coefficients: NDArray[np.float64], x0: float, multiplicity: int) -> float:
    target = P.polyder(coefficients, multiplicity - 1) if multiplicity > 1 else coefficients
    slope_poly = P.polyder(target)
    x = x0
    for _ in range(50):
        slope = P.polyval(x, slope_poly)
        if slope == 0.0:
            break
        step = P.polyval(x, target) / slope
        x -= step
        if abs(step) <= 4.0 * _EPS * max(1.0, abs(x)):
            break
    if not math.isfinite(x) or abs(x - x0) > CLUSTER_GAP * max(1.0, abs(x0)):
        return x0
    return float(x)


def polish_on_product(spec: SpaceSpec, qn: QuantumNumbers, E0: float) -> float:
    """Newton steps on the directly evaluated conjugate product, starting from a fitted root."""
    E = E0
    for _ in range(POLISH_MAX_ITER):
        h = POLISH_STEP * max(1.0, abs(E))
        values = conjugate_product(spec, qn, np.array([E - h, E, E + h])).real
        slope = (values[2] - values[0]) / (2.0 * h)
        if slope == 0.0 or not math.isfinite(slope):
            break
        step = values[1] / slope
        E -= step
        if abs(step) <= 4.0 * _EPS * max(1.0, abs(E)):
            break
    if not math.isfinite(E) or abs(E - E0) > POLISH_LIMIT * max(1.0, abs(E0)):
        return E0
    return float(E)


def _sign_change_roots(spec: SpaceSpec, qn: QuantumNumbers, lo: float, hi: float) -> list[float]:
    grid = np.linspace(lo, hi, PRODUCT_GRID)
    values = conjugate_product(spec, qn, grid).real
    roots = [float(E) for E in grid[values == 0.0]]
    for i in np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0.0)[0]:
        roots.append(_bisect_product(spec, qn, float(grid[i]), float(grid[i + 1]), float(values[i])))
    return roots


def _bisect_product(spec: SpaceSpec, qn: QuantumNumbers, lo: float, hi: float, value_lo: float) -> float:
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        value = float(conjugate_product(spec, qn, np.array([mid])).real[0])
        if value == 0.0:
            return mid
        if (value > 0.0) == (value_lo > 0.0):
            lo, value_lo = mid, value
        else:
            hi = mid
    return 0.5 * (lo + hi)


def product_real_roots(spec: SpaceSpec, qn: QuantumNumbers, form: PolynomialForm) -> list[float]:
    """Real roots of the eliminated polynomial, located on the directly evaluated conjugate product.

    Every fitted root near the real axis seeds a window that covers its cluster. Sign changes of
    the product inside the window are bisected; Newton steps from the seed catch even multiplicities.
    """
    coefficients = np.trim_zeros(np.asarray(form.coefficients, dtype=float), "b")
    all_roots = _all_roots(coefficients)
    seeds = [float(z.real) for z in all_roots if abs(z.imag) <= NEAR_AXIS * max(1.0, abs(z.real))]
    seeds += [root.value for root in poly_real_roots(form)]

    found: list[float] = []
    for seed in seeds:
        scale = max(1.0, abs(seed))
        distance = np.abs(all_roots - seed)
        spread = float(np.max(distance[distance <= CLUSTER_REACH * scale], initial=0.0))
        half_width = max(NEAR_AXIS * scale, 2.0 * spread)
        found += _sign_change_roots(spec, qn, seed - half_width, seed + half_width)
        found.append(polish_on_product(spec, qn, seed))

    merged: list[float] = []
    for E in sorted(found):
        if not math.isfinite(E):
            continue
        if merged and abs(E - merged[-1]) <= MERGE_GAP * max(1.0, abs(E)):
            continue
        merged.append(E)
    return merged


@dataclass(frozen=True)
class CrossValidation:
    qn: QuantumNumbers
    polynomial: PolynomialForm
    matched: tuple[tuple[float, float], ...]
    spurious: tuple[float, ...]
    polynomial_only: tuple[float, ...]
    unmatched: tuple[float, ...]

    @property
    def passed(self) -> bool:
        return not self.unmatched


def cross_validate(spec: SpaceSpec, qn: QuantumNumbers, settings: SolverSettings) -> CrossValidation:
    levels = solve_level(spec, qn, settings)
    # Fit at the scale of the bracketed levels.
    fit_radius = 2.0 * max([1.0] + [abs(level.E) for level in levels])
    form = eliminate_radicals(spec, qn, fit_radius)
    physical: list[float] = []
    spurious: list[float] = []
    for E in product_real_roots(spec, qn, form):
        if not in_physical_domain(spec, E):
            spurious.append(E)
            continue
        try:
            residual = abs(condition_value(spec, qn, E))
        except DomainError:
            spurious.append(E)
            continue
        if residual < ROOT_RESIDUAL * max(1.0, abs(spec.delta * E)):
            physical.append(E)
        else:
            spurious.append(E)

    matched: list[tuple[float, float]] = []
    unmatched: list[float] = []
    used: set[int] = set()
    for level in levels:
        best = None
        for i, E in enumerate(physical):
            if abs(E - level.E) <= MATCH_TOLERANCE * max(1.0, abs(level.E)):
                if best is None or abs(E - level.E) < abs(physical[best] - level.E):
                    best = i
        if best is None:
            unmatched.append(level.E)
        else:
            used.add(best)
            matched.append((level.E, physical[best]))
    polynomial_only = [E for i, E in enumerate(physical) if i not in used]

    report = CrossValidation(
        qn=qn,
        polynomial=form,
        matched=tuple(matched),
        spurious=tuple(spurious),
        polynomial_only=tuple(polynomial_only),
        unmatched=tuple(unmatched),
    )
    if unmatched:
        message = f"{spec.space} qn={qn.pair}: bracketing roots without a polynomial counterpart: {unmatched}"
        logging.warning(message)
        raise VerificationFailure(message, tuple(unmatched))
    return report
