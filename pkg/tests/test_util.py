import io
import math
from pathlib import Path

import numpy as np
import pytest

from plmc.contracts.base import ErrorResponse
from plmc.util.errors import (
    EXIT_CONFIG,
    EXIT_ERROR,
    ConfigError,
    InvalidTargetError,
    PLMCError,
    UnknownSelectorError,
)
from plmc.util.output import format_cell, render_csv, render_json, write_csv, write_json
from plmc.util.parsing import parse_float_list, parse_grid


def test_error_payload_and_exit_status():
    error = InvalidTargetError("bad precision", details={"index": 1})
    assert isinstance(error, PLMCError)
    assert error.exit_status == EXIT_ERROR
    assert str(error) == "invalid_target: bad precision"
    payload = error.to_dict()
    assert payload == {"error": {"code": "invalid_target", "message": "bad precision", "details": {"index": 1}}}
    assert ErrorResponse.model_validate(payload).error.code == "invalid_target"


def test_config_errors_map_to_config_exit():
    assert ConfigError("nope").exit_status == EXIT_CONFIG
    assert "details" not in ConfigError("nope").to_dict()["error"]
    selector = UnknownSelectorError("x", ["a", "b"])
    assert selector.exit_status == EXIT_CONFIG
    assert selector.details == {"choices": ["a", "b"]}


def test_format_cell():
    assert format_cell(True) == "true"
    assert format_cell(np.bool_(False)) == "false"
    assert format_cell(np.int64(3)) == "3"
    assert format_cell(0.1) == "0.10000000000000001"
    assert format_cell(math.nan) == "nan"
    assert format_cell(-math.inf) == "-inf"
    assert format_cell(None) == ""
    assert format_cell("ok") == "ok"


def test_render_csv_keeps_column_order():
    text = render_csv([{"b": 2, "a": 1.5}, {"a": None}], ["a", "b"])
    assert text == "a,b\n1.5,2\n,\n"


def test_write_csv_to_stream_and_path(tmp_path: Path):
    stream = io.StringIO()
    write_csv([{"x": 1}], ["x"], stream)
    assert stream.getvalue() == "x\n1\n"
    target = tmp_path / "nested" / "out.csv"
    write_csv([{"x": 1}], ["x"], target)
    assert target.read_text(encoding="utf-8") == "x\n1\n"


def test_json_is_sorted_and_handles_numpy(tmp_path: Path):
    text = render_json({"b": np.arange(2), "a": np.float64(0.5), "c": Path("x")})
    assert text.index('"a"') < text.index('"b"')
    assert '"c": "x"' in text
    write_json({"n": np.int32(4)}, tmp_path / "r.json")
    assert '"n": 4' in (tmp_path / "r.json").read_text(encoding="utf-8")
    with pytest.raises(TypeError):
        render_json({"bad": object()})


def test_parse_float_list():
    assert parse_float_list("0.1, 0.05,0.025", name="--epsilons") == [0.1, 0.05, 0.025]
    with pytest.raises(ConfigError):
        parse_float_list("0.1,abc", name="--epsilons")
    with pytest.raises(ConfigError):
        parse_float_list("", name="--epsilons")
    with pytest.raises(ConfigError):
        parse_float_list("0.1", name="--epsilons", minimum_count=3)


def test_parse_grid():
    grid = parse_grid("1e-4:1e-1:4")
    assert grid[0] == pytest.approx(1e-4)
    assert grid[-1] == pytest.approx(1e-1)
    assert len(grid) == 4
    assert grid[1] / grid[0] == pytest.approx(10.0)
    assert parse_grid("0.5:1:1") == [0.5]
    for raw in ("1:2", "a:b:c", "0:1:3", "1:2:0"):
        with pytest.raises(ConfigError):
            parse_grid(raw)
