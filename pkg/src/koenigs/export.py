"""CSV and JSON renderings of spectra, wavefunction grids, pole scans and reports.

Output is a pure function of its input: CSV floats carry 17 significant digits,
JSON floats use the round-trip repr, keys are sorted and lines end in LF.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from .green import PoleScan
from .models import (
    EnergyLevel,
    SolverSettings,
    Spectrum,
    make_quantum_numbers,
    space_from_dict,
    space_to_dict,
)
from .wavefun import WavefunctionGrid

SPECTRUM_COLUMNS = ("space", "n1", "n2", "N", "E", "residual", "bracket_lo", "bracket_hi", "method")
WAVEFUNCTION_COLUMNS = ("coord1", "coord2", "psi", "f_weight")
GREEN_SCAN_COLUMNS = ("E", "green_value", "gamma_argument", "is_pole")


def format_float(value: float) -> str:
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.17g}"


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


def render_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def write_text(path: Optional[Path], text: str) -> None:
    """Write to path with LF endings, or to stdout when path is None."""
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def spectrum_rows(spectrum: Spectrum) -> list[list[Any]]:
    rows = []
    for level in spectrum.levels:
        n1, n2 = level.qn.pair
        rows.append(
            [
                level.qn.space,
                n1,
                n2,
                level.qn.N,
                level.E,
                level.residual,
                level.bracket[0],
                level.bracket[1],
                level.method,
            ]
        )
    return rows


def spectrum_csv(spectrum: Spectrum) -> str:
    return render_csv(SPECTRUM_COLUMNS, spectrum_rows(spectrum))


def spectrum_to_dict(spectrum: Spectrum) -> dict:
    return {
        "spec": space_to_dict(spectrum.spec),
        "settings": spectrum.settings.to_dict(),
        "warnings": list(spectrum.warnings),
        "levels": [_level_to_dict(level) for level in spectrum.levels],
    }


def _level_to_dict(level: EnergyLevel) -> dict:
    n1, n2 = level.qn.pair
    return {
        "n1": n1,
        "n2": n2,
        "N": level.qn.N,
        "E": level.E,
        "residual": level.residual,
        "bracket": [level.bracket[0], level.bracket[1]],
        "method": level.method,
    }


def spectrum_from_dict(data: dict) -> Spectrum:
    spec = space_from_dict(data["spec"])
    levels = tuple(
        EnergyLevel(
            E=float(item["E"]),
            qn=make_quantum_numbers(spec.space, int(item["n1"]), int(item["n2"])),
            residual=float(item["residual"]),
            bracket=(float(item["bracket"][0]), float(item["bracket"][1])),
            method=str(item["method"]),
        )
        for item in data["levels"]
    )
    return Spectrum(
        levels=levels,
        spec=spec,
        settings=SolverSettings.from_dict(data.get("settings", {})),
        warnings=tuple(data.get("warnings", ())),
    )


def spectrum_json(spectrum: Spectrum) -> str:
    return render_json(spectrum_to_dict(spectrum))


def wavefunction_csv(grid: WavefunctionGrid) -> str:
    axis1 = grid.coordinates.axis1.nodes
    axis2 = grid.coordinates.axis2.nodes
    rows = (
        [float(axis1[i]), float(axis2[j]), float(grid.values[i, j]), float(grid.f_weight[i, j])]
        for i in range(len(axis1))
        for j in range(len(axis2))
    )
    return render_csv(WAVEFUNCTION_COLUMNS, rows)


def green_scan_csv(scan: PoleScan) -> str:
    rows = ([s.E, s.green_value, s.gamma_argument, s.is_pole] for s in scan.samples)
    return render_csv(GREEN_SCAN_COLUMNS, rows)
