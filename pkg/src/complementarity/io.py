"""JSON wire formats for states, ensembles and witnesses.

Complex numbers travel as ``[re, im]`` pairs and matrices as row-major nested
lists of such pairs.

State file::

    {"dim": 2, "matrix": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]}
    {"dims": [2, 2], "matrix": ...}          # bipartite, A first

Ensemble file::

    {"dim": 2, "normalized": true, "weights": [0.5, 0.5],
     "measurements": [{"labels": ["0", "1"], "effects": [M0, M1]}, ...]}

Witness file::

    {"dims": [2, 2], "weights": [...],
     "pairs": [{"A": {"labels": ..., "effects": ...}, "B": {...}}, ...]}

Probability file (tomography)::

    {"dim": 2, "shots": 0, "probabilities": [[p00, p01], [p10, p11], ...]}
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DimensionError, ValidationError
from .linalg import DEFAULT_TOL, BipartiteState, check_density
from .measurements import Povm, WeightedEnsemble, validate_povm
from .witness import WitnessSpec


def matrix_to_json(mat) -> list:
    mat = np.asarray(mat, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def matrix_from_json(data, what: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"{what}: entries must be [re, im] number pairs") from None
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValidationError(f"{what}: expected rows of [re, im] pairs, got array shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what}: non-finite entry")
    return arr[..., 0] + 1j * arr[..., 1]


def read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise ValidationError(f"{path}: {exc.strerror}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# states


def state_from_dict(data: dict, tol: float = DEFAULT_TOL):
    """Return a density matrix, or a BipartiteState when ``dims`` is given."""
    if "matrix" not in data:
        raise ValidationError("state file: missing 'matrix'")
    mat = matrix_from_json(data["matrix"], "state matrix")
    if "dims" in data:
        dims = tuple(int(x) for x in data["dims"])
        if len(dims) != 2 or dims[0] * dims[1] != mat.shape[0]:
            raise ValidationError(f"state file: dims {list(dims)} do not match matrix size {mat.shape[0]}")
        return BipartiteState(mat, dims, tol)
    dim = int(data.get("dim", mat.shape[0]))
    if mat.shape != (dim, dim):
        raise ValidationError(f"state file: dim {dim} does not match matrix shape {mat.shape}")
    return check_density(mat, tol)


def state_to_dict(state) -> dict:
    if isinstance(state, BipartiteState):
        return {"dims": list(state.dims), "matrix": matrix_to_json(state.matrix)}
    state = np.asarray(state)
    return {"dim": state.shape[0], "matrix": matrix_to_json(state)}


def load_state(path, tol: float = DEFAULT_TOL):
    return state_from_dict(read_json(path), tol)


# --------------------------------------------------------------------------
# measurements


def povm_from_dict(data: dict, dim: int | None = None, where: str = "measurement",
                   tol: float = DEFAULT_TOL) -> Povm:
    if "effects" not in data or not data["effects"]:
        raise ValidationError(f"{where}: missing or empty 'effects'")
    effects = [matrix_from_json(m, f"{where} effect {i}") for i, m in enumerate(data["effects"])]
    for i, m in enumerate(effects):
        if m.shape[0] != m.shape[1] or (dim is not None and m.shape[0] != dim):
            raise DimensionError(f"{where} effect {i}: shape {m.shape} does not match dim {dim}")
    p = Povm(tuple(effects), tuple(data.get("labels", ())))
    report = validate_povm(p, tol)
    if not report.ok:
        raise ValidationError(f"{where}: {report.summary()}")
    return p


def povm_to_dict(p: Povm) -> dict:
    return {"labels": list(p.labels), "effects": [matrix_to_json(m) for m in p.effects]}


def ensemble_from_dict(data: dict, tol: float = DEFAULT_TOL) -> WeightedEnsemble:
    if "measurements" not in data or not data["measurements"]:
        raise ValidationError("ensemble file: missing or empty 'measurements'")
    dim = data.get("dim")
    dim = int(dim) if dim is not None else None
    ms = [povm_from_dict(m, dim, f"measurement {k}", tol) for k, m in enumerate(data["measurements"])]
    weights = data.get("weights")
    if weights is None:
        weights = [1.0 / len(ms)] * len(ms)
    return WeightedEnsemble(tuple(ms), np.asarray(weights, dtype=float),
                            normalized=bool(data.get("normalized", True)))


def ensemble_to_dict(e: WeightedEnsemble) -> dict:
    return {
        "dim": e.dim,
        "normalized": e.normalized,
        "weights": [float(w) for w in e.weights],
        "measurements": [povm_to_dict(p) for p in e.measurements],
    }


def load_ensemble(path, tol: float = DEFAULT_TOL) -> WeightedEnsemble:
    return ensemble_from_dict(read_json(path), tol)


def witness_from_dict(data: dict, tol: float = DEFAULT_TOL) -> WitnessSpec:
    if "pairs" not in data or not data["pairs"]:
        raise ValidationError("witness file: missing or empty 'pairs'")
    d_a, d_b = (int(x) for x in data.get("dims", (None, None))) if "dims" in data else (None, None)
    pairs = []
    for k, pair in enumerate(data["pairs"]):
        a = povm_from_dict(pair["A"], d_a, f"pair {k} side A", tol)
        b = povm_from_dict(pair["B"], d_b, f"pair {k} side B", tol)
        pairs.append((a, b))
    weights = data.get("weights") or [1.0 / len(pairs)] * len(pairs)
    return WitnessSpec(tuple(pairs), np.asarray(weights, dtype=float))


def witness_to_dict(w: WitnessSpec) -> dict:
    return {
        "dims": list(w.dims),
        "weights": [float(x) for x in w.weights],
        "pairs": [{"A": povm_to_dict(a), "B": povm_to_dict(b)} for a, b in w.pairs],
    }


def load_witness(path, tol: float = DEFAULT_TOL) -> WitnessSpec:
    return witness_from_dict(read_json(path), tol)


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture, e.g. ``fixture_path("witness_case_a.json")``."""
    return Path(__file__).parent / "fixtures" / name
