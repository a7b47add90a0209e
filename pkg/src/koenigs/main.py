from __future__ import annotations

import argparse
import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional, Sequence

from .config import logs_dir
from .runner import DEFAULT_GREEN_POINTS, CommandRequest, CommandRunner


def _configure_logging() -> None:
    logs_dir().mkdir(parents=True, exist_ok=True)
    log_path = logs_dir() / "koenigs.log"
    handler = RotatingFileHandler(log_path, maxBytes=2_000_000, backupCount=5)
    formatter = logging.Formatter("%(asctime)s %(levelname)s %(name)s %(message)s")
    handler.setFormatter(formatter)
    logging.basicConfig(level=logging.INFO, handlers=[handler])


def _grid(text: str) -> tuple[int, int]:
    try:
        first, second = (int(part) for part in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like NxM, got {text!r}") from None
    if first < 1 or second < 1:
        raise argparse.ArgumentTypeError("grid sizes must be positive")
    return first, second


def _points(text: str) -> tuple[float, float, float, float]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--at needs four numbers r1,phi1,r2,phi2, got {text!r}") from None
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"--at needs four numbers r1,phi1,r2,phi2, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="koenigs", description="Bound states on Koenigs spaces.")
    commands = parser.add_subparsers(dest="command", required=True)

    spectrum = commands.add_parser("spectrum", help="ordered energy levels")
    spectrum.add_argument("--config", type=Path, required=True)
    spectrum.add_argument("--qn-bound", type=int, default=2)
    spectrum.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    spectrum.add_argument("--out", type=Path)

    verify = commands.add_parser("verify", help="pass/fail verification report")
    verify.add_argument("--config", type=Path, required=True)
    verify.add_argument("--qn-bound", type=int, default=2)
    verify.add_argument("--out", type=Path)

    wavefunction = commands.add_parser("wavefunction", help="normalized wavefunction on a grid")
    wavefunction.add_argument("--config", type=Path, required=True)
    wavefunction.add_argument("--level", type=int, required=True)
    wavefunction.add_argument("--grid", type=_grid, default=(256, 256))
    wavefunction.add_argument("--qn-bound", type=int, default=0)
    wavefunction.add_argument("--out", type=Path, required=True)

    green = commands.add_parser("green-scan", help="Green-function samples and poles over an energy range")
    green.add_argument("--config", type=Path, required=True)
    green.add_argument("--emin", type=float, required=True)
    green.add_argument("--emax", type=float, required=True)
    green.add_argument("--points", type=int, default=400)
    green.add_argument("--qn-bound", type=int, default=3)
    green.add_argument("--at", type=_points, default=DEFAULT_GREEN_POINTS)
    green.add_argument("--out", type=Path, required=True)
    return parser


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    request = CommandRequest(
        command=args.command,
        config_path=args.config,
        out=args.out,
        qn_bound=args.qn_bound,
        fmt=getattr(args, "fmt", "csv"),
        level=getattr(args, "level", 0),
        grid=getattr(args, "grid", (256, 256)),
        emin=getattr(args, "emin", 0.0),
        emax=getattr(args, "emax", 0.0),
        points=getattr(args, "points", 400),
        at=getattr(args, "at", DEFAULT_GREEN_POINTS),
    )
    result = CommandRunner().run(request)
    logging.info(f"{args.command} finished with status {result.status} in {result.end_time - result.start_time}")
    if result.error:
        sys.stderr.write(result.error + "\n")
    return result.exit_code


if __name__ == "__main__":
    _configure_logging()
    sys.exit(run_command())
