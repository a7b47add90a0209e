from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

from .errors import DomainError, PatternMismatchError
from .models import (
    EnergyLevel,
    QuantumNumbers,
    SpaceKI,
    SpaceKII,
    SpaceKIII,
    SpaceSpec,
    make_quantum_numbers,
)
from .quantize import METHOD_CLOSED_FORM, check_matching, condition_value

CASES = ("flat_KI", "flat_KII", "hydrogenlike_KIII", "quad_KIII_k0", "zeropot_KIII")

CONVERGENCE_RATIO = 1e-2


@dataclass(frozen=True)
class ClosedFormReport:
    case: str
    levels: tuple[EnergyLevel, ...]
    notes: tuple[str, ...] = ()
    printed: dict[str, float] = field(default_factory=dict)


def closed_form_special(spec: SpaceSpec, qn: QuantumNumbers, case: str) -> list[EnergyLevel]:
    report = closed_form_report(spec, qn, case)
    for note in report.notes:
        logging.warning(note)
    return list(report.levels)


def closed_form_report(spec: SpaceSpec, qn: QuantumNumbers, case: str) -> ClosedFormReport:
    check_matching(spec, qn)
    handlers = {
        "flat_KI": _flat_ki,
        "flat_KII": _flat_kii,
        "hydrogenlike_KIII": _hydrogenlike_kiii,
        "quad_KIII_k0": _quadratic_kiii_k0,
        "zeropot_KIII": _zero_potential_kiii,
    }
    if case not in handlers:
        raise ValueError(f"Unknown closed-form case: {case}")
    if spec.delta == 0.0:
        raise DomainError("delta must be nonzero")
    return handlers[case](spec, qn)


def applicable_cases(spec: SpaceSpec) -> list[str]:
    cases = []
    if isinstance(spec, SpaceKI) and _is_flat(spec):
        cases.append("flat_KI")
    if isinstance(spec, SpaceKII) and _is_flat(spec):
        cases.append("flat_KII")
    if isinstance(spec, SpaceKIII):
        if spec.alpha1 == 0.0 and spec.beta == 0.0 and spec.gamma == 0.0:
            cases.append("hydrogenlike_KIII")
        if spec.k1 == 0.0 and spec.k2 == 0.0 and spec.beta >= 0.0 and spec.gamma >= 0.0 and spec.delta > 0.0:
            cases.append("quad_KIII_k0")
        if _is_zero_potential(spec):
            cases.append("zeropot_KIII")
    return cases


def _is_flat(spec: SpaceKI | SpaceKII) -> bool:
    return spec.alpha == 0.0 and spec.beta == 0.0 and spec.gamma == 0.0


def _is_zero_potential(spec: SpaceKIII) -> bool:
    return (
        spec.alpha2 == 0.0
        and spec.k1 == 0.5
        and spec.k2 == 0.5
        and spec.beta == spec.gamma
        and spec.delta > 0.0
    )


def _level(spec: SpaceSpec, qn: QuantumNumbers, E: float) -> EnergyLevel:
    try:
        residual = abs(condition_value(spec, qn, E))
    except DomainError:
        residual = math.nan
    return EnergyLevel(E=E, qn=qn, residual=residual, bracket=(E, E), method=METHOD_CLOSED_FORM)


def _flat_ki(spec: SpaceSpec, qn: QuantumNumbers) -> ClosedFormReport:
    if not (isinstance(spec, SpaceKI) and _is_flat(spec)):
        raise PatternMismatchError("flat_KI needs a K_I space with alpha = beta = gamma = 0.")
    hbar = spec.constants.hbar
    E = hbar * spec.omega * (2 * qn.N + spec.kx + spec.ky) / spec.delta
    prose = hbar * spec.omega * (qn.N + spec.kx + spec.ky) / spec.delta
    note = (
        f"flat K_I N={qn.N}: prose flat limit hbar*omega*(N+kx+ky)/delta gives {prose!r}, "
        f"the quantization condition gives {E!r} (relabeling of N)."
    )
    return ClosedFormReport("flat_KI", (_level(spec, qn, E),), (note,), {"prose_E": prose})


def _flat_kii(spec: SpaceSpec, qn: QuantumNumbers) -> ClosedFormReport:
    if not (isinstance(spec, SpaceKII) and _is_flat(spec)):
        raise PatternMismatchError("flat_KII needs a K_II space with alpha = beta = gamma = 0.")
    if not spec.omega > 0.0:
        raise PatternMismatchError("flat_KII needs omega > 0.")
    m, hbar = spec.constants.m, spec.constants.hbar
    E = hbar * spec.omega * (qn.N + spec.kx) / spec.delta + spec.ky_lin**2 / (8.0 * m * spec.delta * spec.omega**2)
    printed = printed_kii_mismatch(spec, qn, E)
    note = f"K_II N={qn.N}: printed condition misses the derived level E={E!r} by relative {printed['relative']:.3e}."
    return ClosedFormReport("flat_KII", (_level(spec, qn, E),), (note,), printed)


def printed_kii_mismatch(spec: SpaceKII, qn: QuantumNumbers, E: float) -> dict[str, float]:
    """Both sides of the printed K_II condition 8m dE w~^2 - (ky - cE)^2 = hbar w~^3 (2N + kx~) at E."""
    m, hbar = spec.constants.m, spec.constants.hbar
    omega_sq = spec.omega**2 - 2.0 * spec.alpha * E / m
    kx_sq = spec.kx**2 - 2.0 * m * spec.beta * E / hbar**2
    if omega_sq < 0.0 or kx_sq < 0.0:
        return {"lhs": math.nan, "rhs": math.nan, "relative": math.nan}
    lhs = 8.0 * m * spec.delta * E * omega_sq - (spec.ky_lin - spec.gamma * E) ** 2
    rhs = hbar * omega_sq**1.5 * (2.0 * qn.N + math.sqrt(kx_sq))
    size = max(abs(lhs), abs(rhs))
    return {"lhs": lhs, "rhs": rhs, "relative": (lhs - rhs) / size if size > 0.0 else 0.0}


def _hydrogenlike_kiii(spec: SpaceSpec, qn: QuantumNumbers) -> ClosedFormReport:
    if not (isinstance(spec, SpaceKIII) and spec.alpha1 == 0.0 and spec.beta == 0.0 and spec.gamma == 0.0):
        raise PatternMismatchError("hydrogenlike_KIII needs a K_III space with alpha1 = beta = gamma = 0.")
    if not spec.alpha2 > 0.0:
        return ClosedFormReport("hydrogenlike_KIII", ())
    m, hbar = spec.constants.m, spec.constants.hbar
    E = -m * spec.alpha2**2 / (2.0 * spec.delta * hbar**2 * (qn.N + 0.5 * (spec.k1 + spec.k2)) ** 2)
    return ClosedFormReport("hydrogenlike_KIII", (_level(spec, qn, E),))


def positive_quadratic_roots(a: float, b: float, c: float) -> list[float]:
    """Positive real roots of a s^2 + b s + c = 0, ascending."""
    if a == 0.0:
        if b == 0.0:
            return []
        roots = [-c / b]
    else:
        disc = b * b - 4.0 * a * c
        if disc < 0.0:
            return []
        q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
        roots = [q / a] if q == 0.0 else [q / a, c / q]
    return sorted({s for s in roots if s > 0.0})


def _quadratic_kiii_k0(spec: SpaceSpec, qn: QuantumNumbers) -> ClosedFormReport:
    if not (isinstance(spec, SpaceKIII) and spec.k1 == 0.0 and spec.k2 == 0.0):
        raise PatternMismatchError("quad_KIII_k0 needs a K_III space with k1 = k2 = 0.")
    if spec.beta < 0.0 or spec.gamma < 0.0 or not spec.delta > 0.0:
        raise PatternMismatchError("quad_KIII_k0 needs beta, gamma >= 0 and delta > 0.")
    m, hbar = spec.constants.m, spec.constants.hbar
    root_m = math.sqrt(m / (2.0 * spec.delta))
    a = spec.alpha1 * root_m - 0.5 * (math.sqrt(2.0 * m * spec.beta) + math.sqrt(2.0 * m * spec.gamma))
    b = -qn.N * hbar
    c = spec.alpha2 * root_m
    levels = tuple(_level(spec, qn, -s * s) for s in positive_quadratic_roots(a, b, c))

    # Printed coefficients carry an unexplained symbol a1, read here as alpha1.
    a1 = spec.alpha1
    A = m * spec.alpha1 * (a1 - 2.0) + 2.0 * m * spec.delta * (math.sqrt(spec.beta) + math.sqrt(spec.gamma)) ** 2
    B = 2.0 * spec.delta * hbar**2 * qn.N**2 + 2.0 * spec.alpha2 * (m - spec.alpha1)
    Cc = m * spec.alpha2**2
    e_plus, e_minus = _printed_pair(A, B, Cc)
    printed = {"A": A, "B": B, "C": Cc, "E_plus": e_plus, "E_minus": e_minus}
    derived = [level.E for level in levels]
    note = (
        f"K_III k1=k2=0 N={qn.N}: printed quadratic (a1 read as alpha1) gives "
        f"E+={e_plus!r}, E-={e_minus!r}; derived levels {derived}."
    )
    return ClosedFormReport("quad_KIII_k0", levels, (note,), printed)


def _printed_pair(A: float, B: float, C: float) -> tuple[float, float]:
    if A == 0.0:
        return math.nan, math.nan
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        return math.nan, math.nan
    root = math.sqrt(disc)
    return (-B + root) / (2.0 * A), (-B - root) / (2.0 * A)


def _zero_potential_kiii(spec: SpaceSpec, qn: QuantumNumbers) -> ClosedFormReport:
    if not (isinstance(spec, SpaceKIII) and _is_zero_potential(spec)):
        raise PatternMismatchError(
            "zeropot_KIII needs a K_III space with alpha2 = 0, k1 = k2 = 1/2, beta = gamma and delta > 0."
        )
    m, hbar = spec.constants.m, spec.constants.hbar
    N = qn.N
    c = spec.alpha1 * math.sqrt(m / (2.0 * spec.delta)) / hbar
    roots = positive_quadratic_roots(c * c - 2.0 * m * spec.beta / hbar**2, -2.0 * c * N, N * N - 0.25)
    # Squaring admits roots with c s < N; those belong to the other sign branch.
    kept = [s for s in roots if c * s - N >= -1e-12 * max(1.0, N)]
    levels = tuple(_level(spec, qn, -s * s) for s in kept)

    k = spec.alpha1**2 / (2.0 * spec.delta) - 4.0 * spec.beta * N
    A = (m**2 / hbar**4) * k**2
    Cc = (N * N + N) ** 2 - 4.0 * N * N
    B = (2.0 * m / hbar**2) * ((N * N + N) * k + 8.0 * spec.beta)
    e_plus, e_minus = _printed_pair(A, B, Cc)
    limit = hbar**2 * N / (2.0 * m * spec.beta) if spec.beta != 0.0 else math.nan
    printed = {"A": A, "B": B, "C": Cc, "E_plus": e_plus, "E_minus": e_minus, "leading_limit": limit}
    note = (
        f"K_III zero potential N={N}: printed quadratic gives E+={e_plus!r}, E-={e_minus!r}; "
        f"derived levels {[level.E for level in levels]}."
    )
    return ClosedFormReport("zeropot_KIII", levels, (note,), printed)


def coulomb_asymptote(spec: SpaceSpec, N: int) -> float:
    if not isinstance(spec, SpaceKIII):
        raise PatternMismatchError("coulomb_asymptote applies to K_III spaces only.")
    if spec.delta == 0.0:
        raise DomainError("delta must be nonzero")
    if N < 1:
        raise ValueError("N must be at least 1.")
    m, hbar = spec.constants.m, spec.constants.hbar
    return -m * spec.alpha2**2 / (2.0 * spec.delta * hbar**2 * N * N)


@dataclass(frozen=True)
class GrowthReport:
    energies: tuple[float, ...]
    gaps: tuple[float, ...]
    second_differences: tuple[float, ...]
    gaps_converge: bool
    second_differences_converge: bool

    def summary(self) -> str:
        if self.gaps_converge:
            return "level gaps converge (linear growth in N)"
        if self.second_differences_converge:
            return "level gaps grow linearly, second differences converge (quadratic growth in N)"
        return "neither level gaps nor second differences converge"


def zero_potential_growth(spec: SpaceKIII, n_max: int = 40) -> GrowthReport:
    """Level sequence E_N, N = 1..n_max, of the zero-potential K_III case (n_phi = 0)."""
    energies = []
    for n_r in range(n_max):
        levels = closed_form_report(spec, make_quantum_numbers("K_III", n_r, 0), "zeropot_KIII").levels
        if not levels:
            break
        energies.append(levels[0].E)
    gaps = [b - a for a, b in zip(energies, energies[1:])]
    second = [b - a for a, b in zip(gaps, gaps[1:])]
    return GrowthReport(
        energies=tuple(energies),
        gaps=tuple(gaps),
        second_differences=tuple(second),
        gaps_converge=_settles(gaps),
        second_differences_converge=_settles(second),
    )


def _settles(values: list[float]) -> bool:
    if len(values) < 3:
        return False
    return abs(values[-1] - values[-2]) <= CONVERGENCE_RATIO * max(abs(values[-1]), 1e-300)
