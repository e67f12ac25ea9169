"""Problem-file loading, validation, and deterministic emission.

The on-disk format is JSON with every complex number written as a
two-element [re, im] array.  Emission is hand-rolled rather than fed
through a generic serializer so the byte stream is fixed: fixed key
order, fixed indentation, LF endings, and every float printed with 17
significant digits (which round-trips float64 exactly).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ParseError, SchemaError, ZeroVector

SCHEMA_VERSION = "1"

_TOP_KEYS = {"schema_version", "dim", "weights", "operators", "vectors"}


def format_float(x: float) -> str:
    """Fixed 17-significant-digit decimal form."""
    return "%.17g" % x


@dataclass
class ProblemFile:
    schema_version: str
    dim: int
    weights: Optional[np.ndarray]
    operators: Optional[np.ndarray]
    vectors: Optional[np.ndarray]

    @property
    def mode(self) -> str:
        return "operators" if self.operators is not None else "vectors"

    @property
    def count(self) -> int:
        if self.operators is not None:
            return int(self.operators.shape[0])
        return int(self.vectors.shape[0])


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _parse_pair(node, where: str) -> complex:
    if not (isinstance(node, list) and len(node) == 2 and all(_is_number(v) for v in node)):
        raise SchemaError(f"{where} must be a two-element [re, im] number pair")
    z = complex(float(node[0]), float(node[1]))
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError(f"{where} is not finite")
    return z


def _parse_weights(node, n: int) -> np.ndarray:
    if not (isinstance(node, list) and len(node) == n):
        raise SchemaError(f"weights must be a list of {n} [re, im] pairs")
    return np.array([_parse_pair(p, f"weights[{i}]") for i, p in enumerate(node)],
                    dtype=np.complex128)


def _parse_operators(node, dim: int) -> np.ndarray:
    if not (isinstance(node, list) and len(node) >= 1):
        raise SchemaError("operators must be a nonempty list of matrices")
    ops = np.empty((len(node), dim, dim), dtype=np.complex128)
    for k, mat in enumerate(node):
        if not (isinstance(mat, list) and len(mat) == dim):
            raise SchemaError(f"operators[{k}] must have {dim} rows")
        for a, row in enumerate(mat):
            if not (isinstance(row, list) and len(row) == dim):
                raise SchemaError(f"operators[{k}][{a}] must have {dim} entries")
            for b, entry in enumerate(row):
                ops[k, a, b] = _parse_pair(entry, f"operators[{k}][{a}][{b}]")
    return ops


def _parse_vectors(node, dim: int) -> np.ndarray:
    if not (isinstance(node, list) and len(node) >= 1):
        raise SchemaError("vectors must be a nonempty list of d-vectors")
    vecs = np.empty((len(node), dim), dtype=np.complex128)
    for k, vec in enumerate(node):
        if not (isinstance(vec, list) and len(vec) == dim):
            raise SchemaError(f"vectors[{k}] must have {dim} entries")
        for a, entry in enumerate(vec):
            vecs[k, a] = _parse_pair(entry, f"vectors[{k}][{a}]")
        if not np.abs(vecs[k]).any():
            raise ZeroVector(f"vectors[{k}] is the zero vector")
    return vecs


def loads_problem(text: str) -> ProblemFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    extra = set(doc) - _TOP_KEYS
    if extra:
        raise SchemaError(f"unknown fields: {', '.join(sorted(extra))}")
    for key in ("schema_version", "dim"):
        if key not in doc:
            raise SchemaError(f"missing field {key}")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {doc['schema_version']!r}")
    dim = doc["dim"]
    if not (isinstance(dim, int) and not isinstance(dim, bool) and dim >= 1):
        raise SchemaError(f"dim must be a positive integer, got {dim!r}")

    has_ops = "operators" in doc
    has_vecs = "vectors" in doc
    if has_ops == has_vecs:
        raise SchemaError("exactly one of operators/vectors must be present")

    operators = _parse_operators(doc["operators"], dim) if has_ops else None
    vectors = _parse_vectors(doc["vectors"], dim) if has_vecs else None
    n = len(operators) if has_ops else len(vectors)

    weights = None
    if "weights" in doc:
        weights = _parse_weights(doc["weights"], n)
    elif has_ops:
        raise SchemaError("weights are required in operators mode")

    return ProblemFile(schema_version=SCHEMA_VERSION, dim=dim,
                       weights=weights, operators=operators, vectors=vectors)


def load_problem(path) -> ProblemFile:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_problem(fh.read())


def _emit_pair(z: complex) -> str:
    return f"[{format_float(z.real)},{format_float(z.imag)}]"


def _emit_vector(v: np.ndarray) -> str:
    return "[" + ",".join(_emit_pair(z) for z in v) + "]"


def _emit_matrix(m: np.ndarray) -> str:
    return "[" + ",".join(_emit_vector(row) for row in m) + "]"


def emit_problem(pf: ProblemFile) -> str:
    """Echo a problem as deterministic JSON text."""
    lines = ["{"]
    lines.append(f'  "schema_version": "{pf.schema_version}",')
    tail_comma = "," if (pf.weights is not None or pf.operators is not None or pf.vectors is not None) else ""
    lines.append(f'  "dim": {pf.dim}{tail_comma}')
    parts = []
    if pf.weights is not None:
        parts.append('  "weights": ' + _emit_vector(pf.weights))
    if pf.operators is not None:
        body = ",\n".join("    " + _emit_matrix(m) for m in pf.operators)
        parts.append('  "operators": [\n' + body + "\n  ]")
    if pf.vectors is not None:
        body = ",\n".join("    " + _emit_vector(v) for v in pf.vectors)
        parts.append('  "vectors": [\n' + body + "\n  ]")
    lines.append(",\n".join(parts))
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_problem(pf: ProblemFile, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(emit_problem(pf))
