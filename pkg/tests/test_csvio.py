import math

import numpy as np
from hypothesis import given, settings, strategies as st

from nlsconserve.csvio import SCHEMAS, emit_csv, format_value, read_csv, render_csv
from nlsconserve.stepper import RunStatus


def test_header_only(tmp_path):
    p = tmp_path / "empty.csv"
    emit_csv(SCHEMAS["dispersion"], [], p)
    assert p.read_bytes() == b"tau,omega,omega_tilde,error,order\n"


def test_formatting():
    assert format_value(None) == ""
    assert format_value(RunStatus.AMPLITUDE_STOP) == "amplitude-stop"
    assert format_value(3) == "3"
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(np.float64(2.5)) == "2.5"
    assert format_value(float("nan")) == "nan"
    assert format_value(-math.inf) == "-inf"


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False), min_size=5, max_size=5))
def test_round_trip(tmp_path_factory, values):
    p = tmp_path_factory.mktemp("rt") / "t.csv"
    emit_csv(SCHEMAS["dispersion"], [values], p)
    header, rows = read_csv(p)
    assert tuple(header) == SCHEMAS["dispersion"]
    assert [float(v) for v in rows[0]] == values


def test_row_length_checked():
    import pytest

    with pytest.raises(ValueError):
        render_csv(("a", "b"), [(1,)])


def test_line_endings_and_stdout(capsys):
    emit_csv(("a", "b"), [(1, None)], "-")
    assert capsys.readouterr().out == "a,b\n1,\n"
