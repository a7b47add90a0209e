from __future__ import annotations

import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from itertools import groupby
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import ConfigError, DomainError, NonConvergenceError, VerificationFailure
from .models import (
    EnergyLevel,
    Interval,
    QuantumNumbers,
    SolverSettings,
    SpaceKI,
    SpaceKII,
    SpaceSpec,
    Spectrum,
    make_quantum_numbers,
)
from .spaces import linear_radicands, physical_energy_domain
from .validation import validate_settings

METHOD_BRACKETING = "bracketing"
METHOD_POLYNOMIAL = "polynomial"
METHOD_CLOSED_FORM = "closed-form"

REFINE_DECADES = 12.0
DISCONTINUITY_RESIDUAL = 1e-6
MAX_WORKERS = 4

_EPS = sys.float_info.epsilon


def check_matching(spec: SpaceSpec, qn: QuantumNumbers) -> None:
    if qn.space != spec.space:
        raise ValueError(f"Quantum numbers for {qn.space} do not fit a {spec.space} space.")


def condition_value(spec: SpaceSpec, qn: QuantumNumbers, E: float) -> float:
    value = float(condition_values(spec, qn, np.array([E], dtype=float))[0])
    if math.isnan(value):
        raise DomainError(f"E={E!r} lies outside the physical energy domain of {spec.space}.")
    return value


def condition_values(spec: SpaceSpec, qn: QuantumNumbers, energies: ArrayLike) -> NDArray[np.float64]:
    """Quantization condition F(E) on an array; NaN where a radicand leaves its range."""
    check_matching(spec, qn)
    E = np.asarray(energies, dtype=float)
    m, hbar = spec.constants.m, spec.constants.hbar
    valid = np.ones(E.shape, dtype=bool)
    radicands: dict[str, NDArray[np.float64]] = {}
    roots: dict[str, NDArray[np.float64]] = {}
    for radicand in linear_radicands(spec):
        value = radicand.a + radicand.b * E
        slack = 64.0 * _EPS * (abs(radicand.a) + np.abs(radicand.b * E))
        value = np.where((value < 0.0) & (value >= -slack), 0.0, value)
        valid &= value > 0.0 if radicand.strict else value >= 0.0
        radicands[radicand.name] = value
        roots[radicand.name] = np.sqrt(np.maximum(value, 0.0))

    with np.errstate(divide="ignore", invalid="ignore"):
        if isinstance(spec, SpaceKI):
            F = spec.delta * E - hbar * roots["omega_tilde_sq"] * (
                2.0 * qn.N + roots["kx_tilde_sq"] + roots["ky_tilde_sq"]
            )
        elif isinstance(spec, SpaceKII):
            shift = (spec.ky_lin - spec.gamma * E) ** 2 / (8.0 * m * radicands["omega_tilde_sq"])
            F = spec.delta * E - shift - hbar * roots["omega_tilde_sq"] * (qn.N + roots["kx_tilde_sq"])
        else:
            kappa = (spec.alpha2 - spec.alpha1 * E) / hbar * np.sqrt(m / (2.0 * radicands["minus_delta_E"]))
            F = kappa - (qn.N + 0.5 * roots["kx_tilde_sq"] + 0.5 * roots["ky_tilde_sq"])
    return np.where(valid, F, np.nan)


def scan_grid(interval: Interval, scan_points: int) -> NDArray[np.float64]:
    lo, hi = interval.lo, interval.hi
    parts = [np.array([lo, hi])]
    if interval.is_finite:
        half_width = 0.5 * (hi - lo)
        toward = half_width * np.logspace(-REFINE_DECADES, 0.0, scan_points)
        parts += [np.linspace(lo, hi, scan_points), lo + toward, hi - toward]
    else:
        offsets = np.logspace(-REFINE_DECADES, REFINE_DECADES, scan_points)
        if math.isfinite(lo):
            parts.append(lo + max(1.0, abs(lo)) * offsets)
        elif math.isfinite(hi):
            parts.append(hi - max(1.0, abs(hi)) * offsets)
        else:
            parts += [-offsets, np.zeros(1), offsets]
    grid = np.unique(np.concatenate(parts))
    grid = grid[np.isfinite(grid)]
    above = grid >= lo if interval.lo_closed else grid > lo
    below = grid <= hi if interval.hi_closed else grid < hi
    return grid[above & below]


def solve_level(spec: SpaceSpec, qn: QuantumNumbers, settings: SolverSettings) -> list[EnergyLevel]:
    levels, notes = _solve_level(spec, qn, settings)
    for note in notes:
        logging.warning(note)
    return levels


def _solve_level(
    spec: SpaceSpec, qn: QuantumNumbers, settings: SolverSettings
) -> tuple[list[EnergyLevel], list[str]]:
    check_matching(spec, qn)
    label = f"{spec.space} qn={qn.pair}"
    levels: list[EnergyLevel] = []
    notes: list[str] = []

    def func(E: float) -> float:
        return float(condition_values(spec, qn, np.array([E]))[0])

    for interval in physical_energy_domain(spec):
        grid = scan_grid(interval, settings.scan_points)
        values = condition_values(spec, qn, grid)
        for E in grid[values == 0.0]:
            levels.append(EnergyLevel(float(E), qn, 0.0, (float(E), float(E)), METHOD_BRACKETING))
        finite = ~np.isnan(values)
        crossing = finite[:-1] & finite[1:] & (np.sign(values[:-1]) * np.sign(values[1:]) < 0.0)
        for i in np.nonzero(crossing)[0]:
            lo, hi = float(grid[i]), float(grid[i + 1])
            E, residual = _bisect(func, lo, hi, float(values[i]), float(values[i + 1]), spec.delta, settings)
            scale = max(1.0, abs(spec.delta * E))
            if residual > DISCONTINUITY_RESIDUAL * scale:
                notes.append(f"{label}: sign change in [{lo!r}, {hi!r}] is a discontinuity, not a root.")
                continue
            limit = settings.tol_abs + settings.tol_rel * abs(spec.delta * E)
            if residual > limit:
                notes.append(f"{label}: residual {residual:.3e} above tolerance {limit:.3e} at E={E!r}.")
            levels.append(EnergyLevel(E, qn, residual, (lo, hi), METHOD_BRACKETING))

    levels.sort(key=lambda level: level.E)
    if len(levels) > 1:
        energies = ", ".join(repr(level.E) for level in levels)
        notes.append(f"{label}: {len(levels)} roots for one quantum-number pair ({energies}).")
    return levels, notes


def _bisect(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    f_lo: float,
    f_hi: float,
    delta: float,
    settings: SolverSettings,
) -> tuple[float, float]:
    for _ in range(settings.max_iter):
        best, f_best = (lo, f_lo) if abs(f_lo) <= abs(f_hi) else (hi, f_hi)
        narrow = hi - lo <= settings.tol_abs + settings.tol_rel * max(abs(lo), abs(hi))
        if narrow and abs(f_best) <= settings.tol_abs + settings.tol_rel * abs(delta * best):
            return best, abs(f_best)
        mid = lo + 0.5 * (hi - lo)
        if mid <= lo or mid >= hi:
            # Bracket is down to adjacent floats.
            return best, abs(f_best)
        f_mid = func(mid)
        if f_mid == 0.0:
            return mid, 0.0
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    raise NonConvergenceError(f"Bisection did not converge in {settings.max_iter} iterations on [{lo!r}, {hi!r}].")


def quantum_number_pairs(spec: SpaceSpec, qn_bound: int) -> list[QuantumNumbers]:
    if qn_bound < 0:
        raise ValueError("qn_bound must be nonnegative.")
    return [
        make_quantum_numbers(spec.space, n1, n2)
        for n1 in range(qn_bound + 1)
        for n2 in range(qn_bound + 1)
    ]


def enumerate_spectrum(
    spec: SpaceSpec,
    qn_bound: int,
    settings: SolverSettings,
    max_workers: int = MAX_WORKERS,
) -> Spectrum:
    errors = validate_settings(settings)
    if errors:
        raise ConfigError(errors)
    pairs = quantum_number_pairs(spec, qn_bound)
    physical_energy_domain(spec)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        results = list(executor.map(lambda qn: _solve_level(spec, qn, settings), pairs))

    levels: list[EnergyLevel] = []
    notes: list[str] = []
    for found, found_notes in results:
        levels.extend(found)
        notes.extend(found_notes)
    for note in notes:
        logging.warning(note)
    if not isinstance(spec, SpaceKII):
        _enforce_degeneracy(spec, pairs, results, settings)
    levels.sort(key=EnergyLevel.sort_key)
    return Spectrum(levels=tuple(levels), spec=spec, settings=settings, warnings=tuple(notes))


def _enforce_degeneracy(
    spec: SpaceSpec,
    pairs: list[QuantumNumbers],
    results: list[tuple[list[EnergyLevel], list[str]]],
    settings: SolverSettings,
) -> None:
    # K_I and K_III conditions depend on N alone.
    by_n = sorted(zip(pairs, results), key=lambda item: item[0].N)
    for N, group in groupby(by_n, key=lambda item: item[0].N):
        energy_sets = [[level.E for level in found] for _, (found, _) in group]
        reference = energy_sets[0]
        for energies in energy_sets[1:]:
            same = len(energies) == len(reference) and all(
                abs(a - b) <= 10.0 * (settings.tol_abs + settings.tol_rel * abs(a))
                for a, b in zip(energies, reference)
            )
            if not same:
                message = f"{spec.space}: levels sharing N={N} disagree: {reference} vs {energies}."
                logging.warning(message)
                raise VerificationFailure(message, tuple(energies))
