"""Plot-ready CSV/JSON writers and state snapshots.

Floats are written with 17 significant digits so every value round-trips
exactly.  Files are written with ``\\n`` line endings regardless of platform.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .lattice import N_DIRECTIONS, LatticeSpec
from .walk import WalkState

__all__ = [
    "SCHEMAS",
    "fmt",
    "load_state_npz",
    "read_state_csv",
    "save_state_npz",
    "write_csv",
    "write_json",
    "write_spectrum_csv",
    "write_state_csv",
    "write_sweep_csv",
    "write_trace_csv",
]

SCHEMAS = {
    "trace": {"version": 1, "columns": ["step", "prob"], "marked_extra": ["coin_uniform_overlap"]},
    "sweep": {"version": 1, "columns": ["side", "N", "t_max", "p_max", "sqrt_NlogN"]},
    "fit": {"version": 1, "keys": ["slope", "intercept", "r_squared", "points", "delta_rule", "log_base"]},
    "spectrum": {
        "version": 1,
        "columns": ["k1", "k2", "ktilde1", "ktilde2", "cos_theta", "theta", "one_minus_cos_inv"],
    },
    "state": {"version": 1, "columns": ["ancilla", "j", "n1", "n2", "re", "im"]},
}


def fmt(x: Any) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return path


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def write_json(path: Path | str, payload: dict) -> Path:
    # json emits shortest repr floats, which already round-trip exactly
    path = Path(path)
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
    return path


def write_trace_csv(path: Path | str, probs: np.ndarray, coin_uniform: np.ndarray | None = None) -> Path:
    if coin_uniform is None:
        return write_csv(path, ["step", "prob"], enumerate(probs))
    return write_csv(
        path,
        ["step", "prob", "coin_uniform_overlap"],
        ((t, p, q) for t, (p, q) in enumerate(zip(probs, coin_uniform))),
    )


def write_sweep_csv(path: Path | str, rows: Iterable[tuple[int, int, int | None, float | None]]) -> Path:
    """Rows of ``(side, N, t_max, p_max)``; the abscissa column is derived."""
    return write_csv(
        path,
        SCHEMAS["sweep"]["columns"],
        ((side, n, t, p, math.sqrt(n * math.log2(n))) for side, n, t, p in rows),
    )


def write_spectrum_csv(path: Path | str, table: list[dict[str, float]]) -> Path:
    cols = SCHEMAS["spectrum"]["columns"]
    return write_csv(path, cols, ([row[c] for c in cols] for row in table))


def write_state_csv(path: Path | str, state: WalkState) -> Path:
    side = state.spec.side
    n1, n2 = np.divmod(np.arange(state.spec.n_sites), side)

    def rows():
        for anc in range(2):
            for j in range(N_DIRECTIONS):
                amp = state.amps[anc, j]
                for site in range(state.spec.n_sites):
                    yield anc, j, n1[site], n2[site], amp[site].real, amp[site].imag

    return write_csv(path, SCHEMAS["state"]["columns"], rows())


def read_state_csv(path: Path | str) -> WalkState:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    n = data.shape[0] // (2 * N_DIRECTIONS)
    side = math.isqrt(n)
    spec = LatticeSpec(side)
    state = WalkState.zeros(spec)
    anc, j, n1, n2 = (data[:, i].astype(int) for i in range(4))
    state.amps[anc, j, n1 * side + n2] = data[:, 4] + 1j * data[:, 5]
    return state


def save_state_npz(path: Path | str, state: WalkState) -> Path:
    path = Path(path)
    np.savez(path, side=state.spec.side, amps=state.amps, has_ancilla=state.has_ancilla)
    return path


def load_state_npz(path: Path | str) -> WalkState:
    with np.load(path) as data:
        spec = LatticeSpec(int(data["side"]))
        return WalkState(spec, data["amps"].copy(), bool(data["has_ancilla"]))
