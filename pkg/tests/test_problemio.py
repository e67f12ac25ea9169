import numpy as np
import pytest

from opsumbounds.errors import ParseError, SchemaError, ZeroVector
from opsumbounds.problemio import (
    ProblemFile,
    emit_problem,
    format_float,
    load_problem,
    loads_problem,
    write_problem,
)
from opsumbounds.rng import PortableRng


def _ops_doc():
    return """
    {
      "schema_version": "1",
      "dim": 2,
      "weights": [[1,0],[0,1]],
      "operators": [
        [[[1,0],[0,0]],[[0,0],[1,0]]],
        [[[0,0],[2,0]],[[0,0],[0,0]]]
      ]
    }
    """


def test_minimal_operator_problem():
    pf = loads_problem(_ops_doc())
    assert pf.mode == "operators"
    assert pf.dim == 2 and pf.count == 2
    assert pf.weights[1] == 1j
    assert pf.operators[1][0, 1] == 2.0


def test_vectors_mode_weights_optional():
    pf = loads_problem('{"schema_version":"1","dim":2,"vectors":[[[3,0],[0,4]]]}')
    assert pf.mode == "vectors"
    assert pf.weights is None
    assert pf.count == 1
    assert pf.vectors[0][1] == 4j


def test_parse_error_on_bad_json():
    with pytest.raises(ParseError):
        loads_problem("{nope")


@pytest.mark.parametrize(
    "text",
    [
        "[1, 2]",
        '{"dim": 1, "weights": [[1,0]], "operators": [[[[1,0]]]]}',
        '{"schema_version": "2", "dim": 1, "weights": [[1,0]], "operators": [[[[1,0]]]]}',
        '{"schema_version": "1", "weights": [[1,0]], "operators": [[[[1,0]]]]}',
        '{"schema_version": "1", "dim": 0, "weights": [[1,0]], "operators": [[[[1,0]]]]}',
        '{"schema_version": "1", "dim": true, "weights": [[1,0]], "operators": [[[[1,0]]]]}',
        '{"schema_version": "1", "dim": 1, "extra": 0, "weights": [[1,0]], "operators": [[[[1,0]]]]}',
        '{"schema_version": "1", "dim": 1, "weights": [[1,0]], "operators": [[[[1,0]]]], "vectors": [[[1,0]]]}',
        '{"schema_version": "1", "dim": 1, "weights": [[1,0]]}',
        '{"schema_version": "1", "dim": 1, "operators": [[[[1,0]]]]}',
        '{"schema_version": "1", "dim": 1, "weights": [[1,0],[2,0]], "operators": [[[[1,0]]]]}',
        '{"schema_version": "1", "dim": 2, "weights": [[1,0]], "operators": [[[[1,0],[0,0]]]]}',
        '{"schema_version": "1", "dim": 1, "weights": [[1,0]], "operators": [[[[1,0],[2,0]]]]}',
        '{"schema_version": "1", "dim": 1, "weights": [[1]], "operators": [[[[1,0]]]]}',
        '{"schema_version": "1", "dim": 1, "weights": [[1,0,0]], "operators": [[[[1,0]]]]}',
        '{"schema_version": "1", "dim": 1, "weights": [["x",0]], "operators": [[[[1,0]]]]}',
        '{"schema_version": "1", "dim": 1, "weights": [[1,0]], "operators": []}',
        '{"schema_version": "1", "dim": 2, "vectors": [[[1,0]]]}',
    ],
)
def test_schema_violations(text):
    with pytest.raises(SchemaError):
        loads_problem(text)


def test_nonfinite_entries_rejected():
    # json.loads itself accepts the Infinity literal, validation must not
    with pytest.raises(ValueError):
        loads_problem('{"schema_version": "1", "dim": 1, "weights": [[Infinity,0]], "operators": [[[[1,0]]]]}')
    with pytest.raises(ValueError):
        loads_problem('{"schema_version": "1", "dim": 1, "weights": [[1,0]], "operators": [[[[NaN,0]]]]}')


def test_zero_vector_rejected():
    with pytest.raises(ZeroVector):
        loads_problem('{"schema_version": "1", "dim": 2, "vectors": [[[0,0],[0,0]]]}')


def test_frozen_single_entry_emission():
    pf = ProblemFile(
        schema_version="1",
        dim=1,
        weights=np.array([1.0 + 0.0j]),
        operators=np.array([[[2.0 + 0.0j]]]),
        vectors=None,
    )
    expected = (
        "{\n"
        '  "schema_version": "1",\n'
        '  "dim": 1,\n'
        '  "weights": [[1,0]],\n'
        '  "operators": [\n'
        "    [[[2,0]]]\n"
        "  ]\n"
        "}\n"
    )
    assert emit_problem(pf) == expected


def test_round_trip_is_exact():
    rng = PortableRng(314)
    pf = ProblemFile(
        schema_version="1",
        dim=3,
        weights=rng.complex_normal(2),
        operators=rng.complex_normal((2, 3, 3)),
        vectors=None,
    )
    back = loads_problem(emit_problem(pf))
    assert back.weights.tobytes() == pf.weights.tobytes()
    assert back.operators.tobytes() == pf.operators.tobytes()


def test_double_emission_is_stable():
    text = emit_problem(loads_problem(_ops_doc()))
    assert emit_problem(loads_problem(text)) == text


def test_file_round_trip(tmp_path):
    path = tmp_path / "problem.json"
    pf = loads_problem(_ops_doc())
    write_problem(pf, path)
    raw = path.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"}\n")
    again = load_problem(path)
    assert again.operators.tobytes() == pf.operators.tobytes()


def test_format_float_pins_seventeen_digits():
    assert format_float(1.0) == "1"
    assert format_float(0.1) == "0.10000000000000001"
    x = 1.0 / 3.0
    assert float(format_float(x)) == x
