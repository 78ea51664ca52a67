"""JSON interchange for matrices and states: {"dim": n, "re": [...], "im": [...]} row-major."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algebra import DIM_CAP, as_element
from .states import State


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return {"dim": int(a.shape[0]), "re": a.real.ravel().tolist(), "im": a.imag.ravel().tolist()}


def matrix_from_json(obj: dict, dim_cap: int | None = DIM_CAP) -> np.ndarray:
    try:
        n = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros(n * n)), dtype=float)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix object: {exc}") from exc
    if n < 1 or re.shape != (n * n,) or im.shape != (n * n,):
        raise ValueError(f"matrix object needs dim >= 1 and {n}*{n} entries in re and im")
    return as_element((re + 1j * im).reshape(n, n), dim_cap=dim_cap)


def state_to_json(phi: State) -> dict:
    return {"kind": "state", **matrix_to_json(phi.rho)}


def state_from_json(obj: dict) -> State:
    if obj.get("kind") != "state":
        raise ValueError('state object must carry {"kind": "state"}')
    return State(matrix_from_json(obj))


def load_matrix(path) -> np.ndarray:
    return matrix_from_json(json.loads(Path(path).read_text()))


def save_matrix(a, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_json(a)))
