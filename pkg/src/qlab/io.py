"""JSON and CSV serialization.

Complex matrices are stored as nested lists of ``[re, im]`` pairs. Python's
``repr``-based float formatting makes JSON round trips bit-exact.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


def matrix_to_json(M) -> list:
    """Dense complex matrix (or vector) as nested ``[re, im]`` pairs."""
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in M]
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(data) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`."""
    arr = np.asarray(data, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def _plain(value):
    """Convert numpy scalars and arrays to JSON-native values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return matrix_to_json(value)
        return _plain(value.tolist())
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if np.isfinite(v) else str(v)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, UTF-8, two-space indent."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path, obj) -> None:
    """Write :func:`dumps` output to ``path``."""
    Path(path).write_text(dumps(obj), encoding="utf-8")


def qlsp_to_json(inst) -> dict:
    """QlspInstance as ``{matrix, rhs, kappa, xi, metadata}``."""
    return {"matrix": matrix_to_json(inst.matrix), "rhs": matrix_to_json(inst.rhs),
            "kappa": inst.kappa, "xi": inst.xi, "metadata": _plain(inst.metadata)}


def qlsp_from_json(data: dict):
    """Inverse of :func:`qlsp_to_json`."""
    from .linear_systems import QlspInstance

    return QlspInstance(matrix_from_json(data["matrix"]), matrix_from_json(data["rhs"]),
                        data["kappa"], data["xi"], dict(data.get("metadata", {})))


def format_float(x) -> str:
    """17 significant digits (round-trip exact for doubles)."""
    return f"{float(x):.17g}"


def write_csv(path, columns: dict) -> None:
    """Write equal-length named columns as RFC 4180 CSV.

    Floats use 17 significant digits; other values use ``str``.
    """
    names = list(columns)
    rows = zip(*(columns[k] for k in names))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(names)
        for row in rows:
            w.writerow([format_float(v) if isinstance(v, (float, np.floating)) else
                        (int(v) if isinstance(v, (np.integer, np.bool_)) else v) for v in row])
