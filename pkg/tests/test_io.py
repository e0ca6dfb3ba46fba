import csv
import json

import numpy as np
from hypothesis import given, strategies as st

from qlab import io
from qlab.linear_systems import build_poisson

floats = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(st.lists(st.tuples(floats, floats), min_size=1, max_size=6))
def test_matrix_json_bit_exact(pairs):
    v = np.array([complex(a, b) for a, b in pairs])
    back = io.matrix_from_json(json.loads(json.dumps(io.matrix_to_json(v))))
    assert np.array_equal(back, v)


def test_dumps_deterministic_sorted():
    a = io.dumps({"b": np.float64(1.5), "a": [np.int64(2), True]})
    assert a == io.dumps({"a": [2, True], "b": 1.5})
    assert a.index('"a"') < a.index('"b"') and a.endswith("\n")


def test_non_finite_becomes_string():
    assert json.loads(io.dumps({"x": float("inf")}))["x"] == "inf"


@given(floats)
def test_format_float_roundtrip(x):
    assert float(io.format_float(x)) == x


def test_csv_rfc4180(tmp_path):
    p = tmp_path / "t.csv"
    io.write_csv(p, {"k": [1, 2], "v": [0.1, 1 / 3], "s": ["a,b", 'q"x']})
    raw = p.read_bytes()
    assert raw.count(b"\r\n") == 3
    rows = list(csv.reader(p.open(newline="")))
    assert rows[0] == ["k", "v", "s"]
    assert float(rows[2][1]) == 1 / 3 and rows[1][2] == "a,b" and rows[2][2] == 'q"x'


def test_qlsp_roundtrip():
    inst = build_poisson(7)
    back = io.qlsp_from_json(json.loads(io.dumps(io.qlsp_to_json(inst))))
    assert np.array_equal(back.matrix, inst.matrix) and np.array_equal(back.rhs, inst.rhs)
    assert back.kappa == inst.kappa and back.metadata["N"] == 7
