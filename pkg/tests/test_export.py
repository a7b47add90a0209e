from __future__ import annotations

import json
import math

from koenigs.export import (
    SPECTRUM_COLUMNS,
    format_float,
    render_csv,
    render_json,
    spectrum_csv,
    spectrum_from_dict,
    spectrum_json,
    spectrum_to_dict,
    write_text,
)
from koenigs.quantize import enumerate_spectrum


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(1.0 / 3.0)) == 1.0 / 3.0
    assert format_float(math.nan) == "nan"
    assert format_float(-math.inf) == "-inf"


def test_render_csv_uses_lf_and_flags():
    text = render_csv(("a", "b", "c"), [[1, 2.5, True], ["x", math.inf, False]])
    assert text == "a,b,c\n1,2.5,1\nx,inf,0\n"


def test_render_json_is_sorted():
    assert render_json({"b": 1, "a": [1.5]}) == '{\n  "a": [\n    1.5\n  ],\n  "b": 1\n}\n'


def test_spectrum_csv(curved_ki, settings):
    spectrum = enumerate_spectrum(curved_ki, 1, settings)
    lines = spectrum_csv(spectrum).split("\n")
    assert lines[0] == ",".join(SPECTRUM_COLUMNS)
    assert lines[-1] == ""
    assert len(lines) == 1 + len(spectrum.levels) + 1
    first = lines[1].split(",")
    assert first[:4] == ["K_I", "0", "0", "1"]
    assert float(first[4]) == spectrum.levels[0].E
    assert "\r" not in spectrum_csv(spectrum)


def test_spectrum_json_round_trip(curved_ki, settings):
    spectrum = enumerate_spectrum(curved_ki, 2, settings)
    text = spectrum_json(spectrum)
    assert spectrum_from_dict(json.loads(text)) == spectrum
    assert json.loads(text) == spectrum_to_dict(spectrum)


def test_spectrum_output_is_deterministic(hydrogen_kiii, settings):
    first = spectrum_json(enumerate_spectrum(hydrogen_kiii, 2, settings))
    second = spectrum_json(enumerate_spectrum(hydrogen_kiii, 2, settings))
    assert first == second


def test_write_text(tmp_path, capsys):
    path = tmp_path / "nested" / "out.csv"
    write_text(path, "a\nb\n")
    assert path.read_bytes() == b"a\nb\n"
    write_text(None, "to stdout\n")
    assert capsys.readouterr().out == "to stdout\n"
