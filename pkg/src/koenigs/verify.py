"""Verification report: radical elimination, closed forms, limits and printed-form diagnostics."""
from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass, field

from .errors import DegeneracyError, DomainError, PatternMismatchError, VerificationFailure
from .models import QuantumNumbers, SolverSettings, SpaceKI, SpaceKII, SpaceKIII, SpaceSpec, make_quantum_numbers
from .quantize import quantum_number_pairs, solve_level
from .radicals import cross_validate
from .spaces import darboux_classify
from .special_cases import (
    applicable_cases,
    closed_form_report,
    coulomb_asymptote,
    printed_kii_mismatch,
    zero_potential_growth,
)

CLOSED_FORM_TOLERANCE = 1e-10
FLAT_STEPS = (1e-3, 1e-4)
FLAT_RATIO = (8.0, 12.0)
ASYMPTOTE_N = (100, 200)
ASYMPTOTE_LIMIT = 1e-2

KI_WHITTAKER_NOTE = (
    "K_I Green function: the Whittaker first index is taken as delta*E/(2*hbar*omega~); "
    "the printed subscript delta*E/(2*omega~) is not dimensionless."
)
KIII_GREEN_NOTE = (
    "K_III Green function: the printed radial product repeats r_>; M is evaluated at r_< and W at r_>."
)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class VerificationReport:
    space: str
    classification: str
    checks: tuple[Check, ...]
    warnings: tuple[str, ...] = ()
    degrees: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "classification": self.classification,
            "passed": self.passed,
            "checks": [check.to_dict() for check in self.checks],
            "warnings": list(self.warnings),
            "degrees": dict(self.degrees),
        }


def run_verification(spec: SpaceSpec, settings: SolverSettings, qn_bound: int = 2) -> VerificationReport:
    checks: list[Check] = []
    warnings: list[str] = []
    degrees: dict[str, int] = {}
    classification = darboux_classify(spec)
    if spec.delta == 0.0:
        detail = "delta = 0: quantization conditions are degenerate; only the Darboux classification is reported"
        return VerificationReport(spec.space, classification, (Check("spectrum", True, detail),))
    pairs = quantum_number_pairs(spec, qn_bound)

    for qn in pairs:
        checks.append(_cross_validation_check(spec, qn, settings, degrees))
    for case in applicable_cases(spec):
        checks.extend(_closed_form_checks(spec, case, pairs, settings, warnings))
    if isinstance(spec, SpaceKI):
        checks.append(flat_limit_check(spec, settings))
        warnings.append(KI_WHITTAKER_NOTE)
    if isinstance(spec, SpaceKII):
        warnings.extend(_printed_kii_notes(spec, pairs, settings))
    if isinstance(spec, SpaceKIII):
        checks.append(coulomb_asymptote_check(spec, settings))
        warnings.append(KIII_GREEN_NOTE)

    report = VerificationReport(
        space=spec.space,
        classification=classification,
        checks=tuple(checks),
        warnings=tuple(warnings),
        degrees=degrees,
    )
    for check in report.checks:
        if not check.passed:
            logging.warning(f"verify {spec.space}: {check.name} failed: {check.detail}")
    return report


def _qn_label(qn: QuantumNumbers) -> str:
    return f"{qn.pair[0]},{qn.pair[1]}"


def _cross_validation_check(
    spec: SpaceSpec, qn: QuantumNumbers, settings: SolverSettings, degrees: dict[str, int]
) -> Check:
    name = f"radical_elimination[{_qn_label(qn)}]"
    try:
        result = cross_validate(spec, qn, settings)
    except VerificationFailure as exc:
        return Check(name, False, str(exc))
    except DegeneracyError as exc:
        levels = solve_level(spec, qn, settings)
        return Check(name, not levels, str(exc))
    degrees[_qn_label(qn)] = result.polynomial.declared_degree
    detail = (
        f"degree {result.polynomial.declared_degree}, {len(result.matched)} matched, "
        f"{len(result.spurious)} spurious, {len(result.polynomial_only)} polynomial-only"
    )
    return Check(name, True, detail)


def _closed_form_checks(
    spec: SpaceSpec,
    case: str,
    pairs: list[QuantumNumbers],
    settings: SolverSettings,
    warnings: list[str],
) -> list[Check]:
    if case == "zeropot_KIII":
        growth = zero_potential_growth(spec)
        warnings.append(f"K_III zero potential: {growth.summary()}.")
    checks = []
    for qn in pairs:
        report = closed_form_report(spec, qn, case)
        warnings.extend(report.notes)
        expected = sorted(level.E for level in report.levels)
        found = sorted(level.E for level in solve_level(spec, qn, settings))
        missing = [
            E for E in expected
            if not any(abs(E - other) <= CLOSED_FORM_TOLERANCE * max(1.0, abs(E)) for other in found)
        ]
        detail = f"closed form {expected}, solver {found}"
        checks.append(Check(f"{case}[{_qn_label(qn)}]", not missing, detail))
    return checks


def _printed_kii_notes(spec: SpaceKII, pairs: list[QuantumNumbers], settings: SolverSettings) -> list[str]:
    notes = []
    for qn in pairs:
        for level in solve_level(spec, qn, settings):
            printed = printed_kii_mismatch(spec, qn, level.E)
            notes.append(
                f"K_II qn={qn.pair}: printed condition at E={level.E!r} gives "
                f"lhs={printed['lhs']!r}, rhs={printed['rhs']!r} (relative {printed['relative']:.3e})."
            )
    return notes


def flat_limit_check(spec: SpaceKI, settings: SolverSettings) -> Check:
    """First-order approach of the ground level to the flat value as alpha = beta = gamma = eps -> 0."""
    name = "flat_limit_continuity"
    if not (spec.omega > 0.0 and spec.kx > 0.0 and spec.ky > 0.0):
        return Check(name, True, "skipped: needs omega, kx, ky > 0")
    qn = make_quantum_numbers(spec.space, 0, 0)

    def ground(eps: float) -> float:
        levels = solve_level(dataclasses.replace(spec, alpha=eps, beta=eps, gamma=eps), qn, settings)
        if not levels:
            raise DomainError(f"no ground level at eps={eps!r}")
        return levels[0].E

    try:
        flat = ground(0.0)
        shifts = [abs(ground(eps) - flat) for eps in FLAT_STEPS]
    except DomainError as exc:
        return Check(name, False, str(exc))
    if shifts[1] == 0.0:
        return Check(name, shifts[0] == 0.0, f"shifts {shifts}")
    ratio = shifts[0] / shifts[1]
    passed = FLAT_RATIO[0] <= ratio <= FLAT_RATIO[1]
    return Check(name, passed, f"E(0)={flat!r}, shifts {shifts}, ratio {ratio:.6g}")


def coulomb_asymptote_check(spec: SpaceKIII, settings: SolverSettings) -> Check:
    """N^2 E_N is within ASYMPTOTE_LIMIT of the Coulomb value at N=100 and still approaching it."""
    name = "coulomb_asymptote"
    if not (spec.alpha2 > 0.0 and spec.delta > 0.0):
        return Check(name, True, "skipped: needs alpha2 > 0 and delta > 0")
    deviations = []
    for N in ASYMPTOTE_N:
        levels = solve_level(spec, make_quantum_numbers(spec.space, N - 1, 0), settings)
        if not levels:
            return Check(name, False, f"no level at N={N}")
        try:
            reference = coulomb_asymptote(spec, N)
        except PatternMismatchError as exc:
            return Check(name, False, str(exc))
        deviations.append(abs(levels[0].E / reference - 1.0))
    passed = (
        all(math.isfinite(d) for d in deviations)
        and deviations[0] < ASYMPTOTE_LIMIT
        and deviations[1] < deviations[0]
    )
    return Check(name, passed, f"relative deviations {dict(zip(ASYMPTOTE_N, deviations))}")
