"""Truncated Green functions (K_I, K_III), the Euclidean K_I kernel and pole analysis."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, PoleError
from .models import EnergyLevel, SolverSettings, SpaceKI, SpaceKII, SpaceSpec, Spectrum, Window, make_quantum_numbers
from .spaces import effective_params, in_physical_domain
from .specfun import bessel_i, log_gamma, signed_log_gamma, whittaker
from .wavefun import angular_pt, assemble_and_normalize, separated_state

MIN_TERMS = 8
POLE_GAP = 1e-6
TRUNCATION_LIMIT = 1e-8
POLE_MATCH = 1e-8
RESIDUE_TOLERANCE = 1e-3
MAX_EXPONENT = 350.0

Points = tuple[float, float, float, float]


@dataclass(frozen=True)
class GreenEvaluation:
    value: float
    terms: int
    truncation_error_estimate: float
    E: float
    flagged: bool = False


def _require_green_space(spec: SpaceSpec) -> None:
    if isinstance(spec, SpaceKII):
        raise DomainError("Green functions are evaluated for K_I and K_III only.")


def gamma_argument(spec: SpaceSpec, E: float, n_phi: int) -> float:
    """Argument of the pole-carrying Gamma factor for angular index n_phi; NaN outside the domain."""
    _require_green_space(spec)
    if not in_physical_domain(spec, E):
        return math.nan
    params = effective_params(spec, E, _qn(spec, 0, n_phi))
    if params.lam is None:
        return math.nan
    if isinstance(spec, SpaceKI):
        if not params.omega_tilde:
            return math.nan
        return 0.5 * (1.0 + params.lam - spec.delta * E / (spec.constants.hbar * params.omega_tilde))
    if params.kappa is None:
        return math.nan
    return 0.5 + params.lam - params.kappa


def _qn(spec: SpaceSpec, n_r: int, n_phi: int):
    return make_quantum_numbers(spec.space, n_r, n_phi)


def _check_pole(g: float, E: float) -> None:
    nearest = round(g)
    if nearest <= 0 and abs(g - nearest) < POLE_GAP:
        raise PoleError(f"E={E!r} lies within {POLE_GAP} of a Green-function pole (Gamma argument {g!r}).")


def _gamma_ratio(numerator: float, denominator: float) -> float:
    log_num, sign = signed_log_gamma(numerator)
    return sign * math.exp(log_num - log_gamma(denominator))


def green_term(spec: SpaceSpec, points: Points, E: float, n_phi: int) -> float:
    r1, phi1, r2, phi2 = points
    if not (r1 > 0.0 and r2 > 0.0):
        raise DomainError("Green functions need r', r'' > 0.")
    m, hbar = spec.constants.m, spec.constants.hbar
    params = effective_params(spec, E, _qn(spec, 0, n_phi))
    r_small, r_large = min(r1, r2), max(r1, r2)
    g = gamma_argument(spec, E, n_phi)
    if math.isnan(g):
        raise DomainError(f"E={E!r} lies outside the physical energy domain of {spec.space}.")
    _check_pole(g, E)

    if isinstance(spec, SpaceKI):
        omega = params.omega_tilde
        angular = angular_pt(n_phi, params.ky_tilde, params.kx_tilde, phi1) * angular_pt(
            n_phi, params.ky_tilde, params.kx_tilde, phi2
        )
        kappa = spec.delta * E / (2.0 * hbar * omega)
        mu = 0.5 * params.lam
        s = m * omega / hbar
        prefactor = _gamma_ratio(g, 1.0 + params.lam) / (hbar * omega * math.sqrt(r1 * r2))
        radial = whittaker("W", kappa, mu, s * r_large**2) * whittaker("M", kappa, mu, s * r_small**2)
        return angular * prefactor * radial

    angular = angular_pt(n_phi, params.ky_tilde, params.kx_tilde, 0.5 * phi1) * angular_pt(
        n_phi, params.ky_tilde, params.kx_tilde, 0.5 * phi2
    )
    lam = params.lam
    root = math.sqrt(-8.0 * m * spec.delta * E) / hbar
    prefactor = math.sqrt(-m / (2.0 * spec.delta * E)) / hbar * _gamma_ratio(g, 2.0 * lam + 1.0)
    radial = whittaker("W", params.kappa, lam, root * r_large) * whittaker("M", params.kappa, lam, root * r_small)
    return angular * prefactor * radial


def green_value(spec: SpaceSpec, points: Points, E: float, n_max: int) -> GreenEvaluation:
    _require_green_space(spec)
    terms = max(n_max, MIN_TERMS - 1) + 1
    total = 0.0
    last = 0.0
    for n_phi in range(terms):
        last = green_term(spec, points, E, n_phi)
        total += last
    flagged = abs(last) >= TRUNCATION_LIMIT * abs(total)
    if flagged:
        logging.warning(f"{spec.space} Green function at E={E!r}: last term {last!r} is not negligible.")
    return GreenEvaluation(value=total, terms=terms, truncation_error_estimate=abs(last), E=E, flagged=flagged)


def kernel_value(spec: SpaceSpec, points: Points, tau: float, n_max: int, E: float = 0.0) -> float:
    """Euclidean-time K_I kernel at time tau, with omega~ and k~ taken at energy E."""
    if not isinstance(spec, SpaceKI):
        raise DomainError("The time-transformed kernel is evaluated for K_I only.")
    if not tau > 0.0:
        raise DomainError("Euclidean time must be positive.")
    r1, phi1, r2, phi2 = points
    m, hbar = spec.constants.m, spec.constants.hbar
    base = effective_params(spec, E, _qn(spec, 0, 0))
    if not base.omega_tilde or base.kx_tilde is None or base.ky_tilde is None:
        raise DomainError(f"omega~ and k~ must be defined and positive at E={E!r}.")
    omega = base.omega_tilde
    if omega * tau > MAX_EXPONENT:
        raise DomainError(f"omega~ * tau = {omega * tau!r} overflows the kernel.")
    sinh = math.sinh(omega * tau)
    coth = math.cosh(omega * tau) / sinh
    radial_factor = m * omega * math.sqrt(r1 * r2) / (hbar * sinh)
    gauss = math.exp(-(m * omega / (2.0 * hbar)) * (r1 * r1 + r2 * r2) * coth)
    z = m * omega * r1 * r2 / (hbar * sinh)
    total = 0.0
    for n_phi in range(max(n_max, MIN_TERMS - 1) + 1):
        lam = 2.0 * n_phi + base.kx_tilde + base.ky_tilde + 1.0
        angular = angular_pt(n_phi, base.ky_tilde, base.kx_tilde, phi1) * angular_pt(
            n_phi, base.ky_tilde, base.kx_tilde, phi2
        )
        total += angular * radial_factor * gauss * bessel_i(lam, z)
    return total


def kernel_decay_rate(
    spec: SpaceSpec, points: Points, tau1: float, tau2: float, n_max: int, E: float = 0.0
) -> float:
    """Negative log-slope of the kernel between tau1 and tau2."""
    k1 = kernel_value(spec, points, tau1, n_max, E)
    k2 = kernel_value(spec, points, tau2, n_max, E)
    if not (k1 > 0.0 and k2 > 0.0):
        raise DomainError("Kernel values must be positive to take a log-slope.")
    return -(math.log(k2) - math.log(k1)) / (tau2 - tau1)


@dataclass(frozen=True)
class Pole:
    E: float
    pairs: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class GreenSample:
    E: float
    green_value: float
    gamma_argument: float
    is_pole: bool


@dataclass(frozen=True)
class PoleScan:
    poles: tuple[Pole, ...]
    matched: tuple[tuple[float, float], ...]
    missed_poles: tuple[float, ...]
    missed_levels: tuple[float, ...]
    samples: tuple[GreenSample, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.missed_poles and not self.missed_levels


def pole_scan(
    spec: SpaceSpec,
    points: Optional[Points],
    E_range: tuple[float, float],
    n_points: int,
    spectrum: Spectrum,
    qn_bound: Optional[int] = None,
    n_max: int = 12,
) -> PoleScan:
    _require_green_space(spec)
    lo, hi = E_range
    if qn_bound is None:
        qn_bound = max((max(level.qn.pair) for level in spectrum.levels), default=0)
    settings = spectrum.settings
    energies = np.linspace(lo, hi, max(n_points, 2)) if hi > lo else np.array([])

    found: list[tuple[float, tuple[int, int]]] = []
    for n_phi in range(qn_bound + 1):
        g = np.array([gamma_argument(spec, float(E), n_phi) for E in energies])
        for n_r in range(qn_bound + 1):
            h = g + n_r
            finite = np.isfinite(h[:-1]) & np.isfinite(h[1:])
            crossing = finite & (np.sign(h[:-1]) * np.sign(h[1:]) <= 0.0) & (h[:-1] != h[1:])
            for i in np.nonzero(crossing)[0]:
                E = _refine_pole(spec, n_phi, n_r, float(energies[i]), float(energies[i + 1]), settings)
                found.append((E, (n_r, n_phi)))

    poles: list[Pole] = []
    for E, pair in sorted(found):
        if poles and abs(E - poles[-1].E) <= POLE_MATCH * max(1.0, abs(E)):
            poles[-1] = Pole(poles[-1].E, poles[-1].pairs + (pair,))
        else:
            poles.append(Pole(E, (pair,)))

    in_range = sorted({level.E for level in spectrum.levels if lo <= level.E <= hi})
    matched: list[tuple[float, float]] = []
    missed_poles: list[float] = []
    hit: set[float] = set()
    for pole in poles:
        level = min(in_range, key=lambda value: abs(value - pole.E), default=None)
        if level is not None and abs(level - pole.E) <= POLE_MATCH * max(1.0, abs(pole.E)):
            matched.append((pole.E, level))
            hit.add(level)
        else:
            missed_poles.append(pole.E)
    missed_levels = [E for E in in_range if E not in hit]

    samples = _samples(spec, points, energies, poles, n_max)
    report = PoleScan(
        poles=tuple(poles),
        matched=tuple(matched),
        missed_poles=tuple(missed_poles),
        missed_levels=tuple(missed_levels),
        samples=samples,
    )
    if not report.passed:
        logging.warning(f"{spec.space} pole scan: poles {missed_poles} and levels {missed_levels} unmatched.")
    return report


def _refine_pole(spec: SpaceSpec, n_phi: int, n_r: int, lo: float, hi: float, settings: SolverSettings) -> float:
    def h(E: float) -> float:
        return gamma_argument(spec, E, n_phi) + n_r

    f_lo, f_hi = h(lo), h(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    for _ in range(settings.max_iter):
        mid = lo + 0.5 * (hi - lo)
        if mid <= lo or mid >= hi or hi - lo <= settings.tol_abs + settings.tol_rel * abs(mid):
            break
        f_mid = h(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return lo if abs(f_lo) <= abs(f_hi) else hi


def _samples(
    spec: SpaceSpec, points: Optional[Points], energies: np.ndarray, poles: list[Pole], n_max: int
) -> tuple[GreenSample, ...]:
    rows = [(float(E), False) for E in energies] + [(pole.E, True) for pole in poles]
    samples = []
    for E, is_pole in sorted(rows):
        value = math.nan
        if points is not None and not is_pole:
            try:
                value = green_value(spec, points, E, n_max).value
            except (PoleError, DomainError):
                value = math.nan
        samples.append(GreenSample(E=E, green_value=value, gamma_argument=gamma_argument(spec, E, 0), is_pole=is_pole))
    return tuple(samples)


@dataclass(frozen=True)
class ResidueCheck:
    E: float
    residue: float
    expected: float
    relative_deviation: float

    @property
    def passed(self) -> bool:
        return self.relative_deviation < RESIDUE_TOLERANCE


def residue_check(
    spec: SpaceSpec,
    points: Points,
    level: EnergyLevel,
    spectrum: Spectrum,
    window: Window,
    n_max: int = 12,
    step: Optional[float] = None,
) -> ResidueCheck:
    """Compare lim (E_N - E) G(E) with the f-normalized multiplet product at the same points."""
    if not isinstance(spec, SpaceKI):
        raise DomainError("The residue cross-check is implemented for K_I only.")
    E_N = level.E
    h = step if step is not None else 1e-3 * max(1.0, abs(E_N))

    def symmetric(width: float) -> float:
        below = width * green_value(spec, points, E_N - width, n_max).value
        above = -width * green_value(spec, points, E_N + width, n_max).value
        return 0.5 * (below + above)

    residue = (4.0 * symmetric(h) - symmetric(2.0 * h)) / 3.0

    r1, phi1, r2, phi2 = points
    expected = 0.0
    settings: SolverSettings = spectrum.settings
    for member in spectrum.levels:
        if member.qn.N != level.qn.N:
            continue
        state = assemble_and_normalize(spec, member, window, settings)
        first = float(separated_state(spec, member, np.array([r1]), np.array([phi1]))[0, 0])
        second = float(separated_state(spec, member, np.array([r2]), np.array([phi2]))[0, 0])
        # The radial Green factor is written for the measure dr, hence sqrt(r' r'').
        expected += state.scale**2 * first * second * math.sqrt(r1 * r2)
    size = max(abs(expected), abs(residue))
    deviation = abs(residue - expected) / size if size > 0.0 else 0.0
    return ResidueCheck(E=E_N, residue=residue, expected=expected, relative_deviation=deviation)
