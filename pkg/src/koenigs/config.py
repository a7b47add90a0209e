from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .errors import ConfigError
from .models import SPACE_TYPES, SolverSettings, SpaceSpec, Window, space_from_dict
from .validation import validate_settings, validate_spec

REQUIRED_FIELDS: dict[str, dict[str, tuple[str, ...]]] = {
    "K_I": {"metric": ("alpha", "beta", "gamma", "delta"), "potential": ("omega", "kx", "ky")},
    "K_II": {"metric": ("alpha", "beta", "gamma", "delta"), "potential": ("omega", "kx", "ky_lin")},
    "K_III": {"metric": ("alpha1", "beta", "gamma", "delta"), "potential": ("alpha2", "k1", "k2")},
}
DEFAULT_WINDOW = {"x": [-8.0, 8.0], "y": [-8.0, 8.0]}
ZERO_DELTA = "delta must be nonzero"


def app_root() -> Path:
    return Path(__file__).resolve().parents[2]


def logs_dir() -> Path:
    return app_root() / "logs"


@dataclass(frozen=True)
class RunConfig:
    spec: SpaceSpec
    solver: SolverSettings = field(default_factory=SolverSettings)
    window: Window = field(default_factory=lambda: Window.from_dict(DEFAULT_WINDOW))


def load_run_config(path: Path, allow_zero_delta: bool = False) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError([f"Config file not found: {path}."]) from None
    except json.JSONDecodeError as exc:
        raise ConfigError([f"Config file {path} is not valid JSON: {exc}."]) from None
    return parse_run_config(data, allow_zero_delta)


def parse_run_config(data: Mapping[str, Any], allow_zero_delta: bool = False) -> RunConfig:
    """Parse and validate a run config; allow_zero_delta admits the Darboux reductions for classification."""
    if not isinstance(data, Mapping):
        raise ConfigError(["Config must be a JSON object."])
    errors: list[str] = []
    space = data.get("space")
    if space not in SPACE_TYPES:
        raise ConfigError([f"space must be one of {', '.join(SPACE_TYPES)}, got {space!r}."])

    for section, names in REQUIRED_FIELDS[space].items():
        values = data.get(section)
        if not isinstance(values, Mapping):
            errors.append(f"Missing {section}.")
            continue
        for name in names:
            _require_number(values, section, name, errors)
    constants = data.get("constants", {})
    if not isinstance(constants, Mapping):
        errors.append("constants must be an object.")
    else:
        for name in ("m", "hbar"):
            if name in constants:
                _require_number(constants, "constants", name, errors)
    if errors:
        raise ConfigError(errors)

    spec = space_from_dict(data)
    try:
        solver = SolverSettings.from_dict(data.get("solver", {}))
        window = Window.from_dict(data.get("window", DEFAULT_WINDOW))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError([f"Invalid solver or window section: {exc}."]) from None

    errors.extend(validate_settings(solver))
    report = validate_spec(spec, window)
    errors.extend(v for v in report.violations if not (allow_zero_delta and v == ZERO_DELTA))
    if errors:
        raise ConfigError(errors)
    return RunConfig(spec=spec, solver=solver, window=window)


def _require_number(values: Mapping[str, Any], section: str, key: str, errors: list[str]) -> None:
    if key not in values:
        errors.append(f"Missing {section}.{key}.")
        return
    value = values[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        errors.append(f"{section}.{key} must be a number.")
