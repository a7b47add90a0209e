from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Callable, Optional

from . import export
from .config import RunConfig, load_run_config
from .errors import ConfigError, KoenigsError, NonConvergenceError, VerificationFailure
from .green import pole_scan
from .quantize import enumerate_spectrum
from .verify import run_verification
from .wavefun import assemble_and_normalize, make_grid

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NONCONVERGENCE = 3
EXIT_VERIFICATION = 4

DEFAULT_GREEN_POINTS = (1.0, 0.25 * math.pi, 2.0, 0.25 * math.pi)


@dataclass
class RunResult:
    status: str
    exit_code: int
    output: str
    error: str
    start_time: datetime
    end_time: datetime


@dataclass(frozen=True)
class CommandRequest:
    command: str
    config_path: Path
    out: Optional[Path] = None
    qn_bound: int = 2
    fmt: str = "csv"
    level: int = 0
    grid: tuple[int, int] = (256, 256)
    emin: float = 0.0
    emax: float = 0.0
    points: int = 400
    at: tuple[float, float, float, float] = DEFAULT_GREEN_POINTS


class CommandRunner:
    def run(self, request: CommandRequest) -> RunResult:
        start_time = datetime.now()
        handlers: dict[str, Callable[[RunConfig, CommandRequest], tuple[str, int]]] = {
            "spectrum": self._spectrum,
            "verify": self._verify,
            "wavefunction": self._wavefunction,
            "green-scan": self._green_scan,
        }
        try:
            config = load_run_config(request.config_path, allow_zero_delta=request.command == "verify")
            output, exit_code = handlers[request.command](config, request)
            status = "success" if exit_code == EXIT_OK else "failed"
            return RunResult(status, exit_code, output, "", start_time, datetime.now())
        except ConfigError as exc:
            return self._failure("invalid-config", EXIT_CONFIG, "\n".join(exc.messages), start_time)
        except NonConvergenceError as exc:
            return self._failure("nonconvergence", EXIT_NONCONVERGENCE, str(exc), start_time)
        except VerificationFailure as exc:
            return self._failure("verification-failed", EXIT_VERIFICATION, str(exc), start_time)
        except KoenigsError as exc:
            # Remaining domain errors come from the configured parameters.
            return self._failure("invalid-config", EXIT_CONFIG, str(exc), start_time)

    def _failure(self, status: str, exit_code: int, error: str, start_time: datetime) -> RunResult:
        logging.warning(f"{status}: {error}")
        return RunResult(status, exit_code, "", error, start_time, datetime.now())

    def _spectrum(self, config: RunConfig, request: CommandRequest) -> tuple[str, int]:
        spectrum = enumerate_spectrum(config.spec, request.qn_bound, config.solver)
        text = export.spectrum_json(spectrum) if request.fmt == "json" else export.spectrum_csv(spectrum)
        export.write_text(request.out, text)
        return text, EXIT_OK

    def _verify(self, config: RunConfig, request: CommandRequest) -> tuple[str, int]:
        report = run_verification(config.spec, config.solver, request.qn_bound)
        text = export.render_json(report.to_dict())
        export.write_text(request.out, text)
        return text, EXIT_OK if report.passed else EXIT_VERIFICATION

    def _wavefunction(self, config: RunConfig, request: CommandRequest) -> tuple[str, int]:
        spectrum = enumerate_spectrum(config.spec, max(request.qn_bound, request.level), config.solver)
        if not 0 <= request.level < len(spectrum.levels):
            raise ConfigError([f"level {request.level} is out of range (spectrum has {len(spectrum.levels)} levels)."])
        level = spectrum.levels[request.level]
        grid = make_grid(config.spec, config.window, *request.grid)
        state = assemble_and_normalize(config.spec, level, grid, config.solver)
        text = export.wavefunction_csv(state)
        export.write_text(request.out, text)
        return text, EXIT_OK

    def _green_scan(self, config: RunConfig, request: CommandRequest) -> tuple[str, int]:
        spectrum = enumerate_spectrum(config.spec, request.qn_bound, config.solver)
        scan = pole_scan(
            config.spec,
            request.at,
            (request.emin, request.emax),
            request.points,
            spectrum,
            qn_bound=request.qn_bound,
        )
        text = export.green_scan_csv(scan)
        export.write_text(request.out, text)
        return text, EXIT_OK if scan.passed else EXIT_VERIFICATION
