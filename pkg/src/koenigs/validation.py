from __future__ import annotations

import numpy as np

from .errors import SingularCoordinateError
from .models import SolverSettings, SpaceKI, SpaceKII, SpaceSpec, ValidationReport, Window
from .spaces import metric_value

SAMPLE_SIDE = 32


def validate_spec(spec: SpaceSpec, window: Window) -> ValidationReport:
    violations = []
    violations.extend(validate_constants(spec))
    violations.extend(validate_potential(spec))
    violations.extend(validate_metric_positivity(spec, window))
    return ValidationReport(passed=not violations, violations=tuple(violations))


def validate_constants(spec: SpaceSpec) -> list[str]:
    errors = []
    if spec.delta == 0.0:
        errors.append("delta must be nonzero")
    if not spec.constants.m > 0.0:
        errors.append("m must be positive")
    if not spec.constants.hbar > 0.0:
        errors.append("hbar must be positive")
    return errors


def validate_potential(spec: SpaceSpec) -> list[str]:
    if isinstance(spec, SpaceKI):
        named = {"omega": spec.omega, "kx": spec.kx, "ky": spec.ky}
    elif isinstance(spec, SpaceKII):
        named = {"omega": spec.omega, "kx": spec.kx}
    else:
        named = {"k1": spec.k1, "k2": spec.k2}
    return [f"{name} must be nonnegative" for name, value in named.items() if value < 0.0]


def validate_metric_positivity(spec: SpaceSpec, window: Window) -> list[str]:
    if window.x_lo > window.x_hi or window.y_lo > window.y_hi:
        return ["window bounds are reversed"]
    failures = []
    sampled = 0
    for x in np.linspace(window.x_lo, window.x_hi, SAMPLE_SIDE):
        for y in np.linspace(window.y_lo, window.y_hi, SAMPLE_SIDE):
            if x == 0.0 or y == 0.0:
                continue
            try:
                value = metric_value(spec, float(x), float(y))
            except SingularCoordinateError:
                continue
            sampled += 1
            if not value > 0.0:
                failures.append((float(x), float(y), value))
    if not failures:
        return []
    x, y, value = failures[0]
    return [
        f"metric f <= 0 at {len(failures)} of {sampled} sampled points "
        f"(first at x={x:.6g}, y={y:.6g}, f={value:.6g})"
    ]


def validate_settings(settings: SolverSettings) -> list[str]:
    errors = []
    if settings.scan_points < 100:
        errors.append("scan_points must be at least 100")
    for name in ("tol_abs", "tol_rel", "max_iter", "quad_points", "series_terms_max"):
        if not getattr(settings, name) > 0:
            errors.append(f"{name} must be positive")
    return errors
