"""Deterministic formatting and atomic output."""

import json
import math

import numpy as np
import pytest

from ghlab.serialize import (
    atomic_write_text,
    format_value,
    to_plain,
    write_csv,
    write_json,
)


def test_format_value_floats_round_trip():
    rng = np.random.default_rng(3)
    for x in rng.uniform(-1e6, 1e6, 50):
        assert float(format_value(float(x))) == float(x)
    assert float(format_value(0.1)) == 0.1
    assert format_value(0.1, precision=6) == "0.1"
    assert format_value(True) == "true"
    assert format_value(np.False_) == "false"
    assert format_value(np.int64(7)) == "7"
    assert format_value(1.0 / 3.0, precision=3) == "0.333"


def test_to_plain_strips_numpy():
    obj = {"a": np.arange(3), "b": np.float64(1.5), "c": [np.int32(2), (1, 2)]}
    plain = to_plain(obj)
    assert plain == {"a": [0, 1, 2], "b": 1.5, "c": [2, [1, 2]]}
    assert json.dumps(plain, sort_keys=True)


def test_write_csv_requires_units(tmp_path):
    path = tmp_path / "t.csv"
    with pytest.raises(ValueError):
        write_csv(path, ["time"], [[1.0]])
    write_csv(path, ["time [1]", "x [length]"], [[1.0, 0.25], [2, "abc"]])
    lines = path.read_text().splitlines()
    assert lines[0] == "time [1],x [length]"
    assert lines[1] == "1,0.25"
    assert lines[2] == "2,abc"


def test_write_json_sorted_and_stable(tmp_path):
    path = tmp_path / "t.json"
    write_json(path, {"b": np.float64(2.0), "a": [np.inf]})
    first = path.read_bytes()
    write_json(path, {"b": np.float64(2.0), "a": [np.inf]})
    assert path.read_bytes() == first
    data = json.loads(first)
    assert data["a"][0] == math.inf
    assert list(data) == ["a", "b"]


def test_atomic_write_replaces_only_on_success(tmp_path):
    path = tmp_path / "out.txt"
    atomic_write_text(path, "one")
    atomic_write_text(path, "two")
    assert path.read_text() == "two"
    leftovers = [p for p in tmp_path.iterdir() if p.name.startswith(".tmp-")]
    assert leftovers == []
