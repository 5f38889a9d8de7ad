"""Coined walk state and the three one-step evolution maps.

The state is a single ``complex128`` array of shape ``(2, 6, N)`` indexed by
(ancilla, direction, flat site).  Plain and marked-coin walks only touch the
ancilla-1 slice; the Tulsi map couples both.  Every step writes a fresh output
buffer (no in-place aliasing), because shift routing makes in-place updates
order dependent.

Step application is data parallel over output sites.  With ``threads > 1`` the
site range is split into chunks that run on a thread pool; each chunk performs
exactly the same elementwise operations, so results are bitwise independent of
the thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .lattice import N_DIRECTIONS, LatticeSpec, SiteIndex, neighbor_table, opposite

__all__ = [
    "TulsiParams",
    "WalkState",
    "apply_step_marked",
    "apply_step_standard",
    "apply_step_tulsi",
    "grover_coin",
    "success_probability_coin_uniform",
    "success_probability_position",
    "success_probability_tulsi",
    "uniform_initial_state",
]

# Smallest number of sites handed to one worker; below this threading costs more than it saves.
MIN_CHUNK_SITES = 128


def grover_coin(d: int = N_DIRECTIONS) -> np.ndarray:
    """Grover diffusion coin, entries ``2/d - delta_ij``.

    Reflection about the uniform coin vector: symmetric and ``G @ G = I``.
    """
    if d < 1:
        raise ValueError(f"Grover coin requires d ≥ 1 (got {d})")
    return np.full((d, d), 2.0 / d) - np.eye(d)


@dataclass
class WalkState:
    """Amplitudes over (ancilla, direction, site).

    ``amps[0]`` holds the ancilla-0 amplitudes (``a``), ``amps[1]`` the
    ancilla-1 amplitudes (``b``).  For runs without the ancilla the ``amps[0]``
    slice stays zero and ``has_ancilla`` is False.
    """

    spec: LatticeSpec
    amps: np.ndarray
    has_ancilla: bool = True

    def __post_init__(self) -> None:
        shape = (2, N_DIRECTIONS, self.spec.n_sites)
        if self.amps.shape != shape:
            raise ValueError(f"amplitude array must have shape {shape}, got {self.amps.shape}")
        if self.amps.dtype != np.complex128:
            self.amps = self.amps.astype(np.complex128)

    @classmethod
    def zeros(cls, spec: LatticeSpec, has_ancilla: bool = True) -> WalkState:
        return cls(spec, np.zeros((2, N_DIRECTIONS, spec.n_sites), dtype=np.complex128), has_ancilla)

    @classmethod
    def from_vector(cls, spec: LatticeSpec, vec: np.ndarray) -> WalkState:
        """Build from a flat vector of length ``6N`` (ancilla 1 only) or ``12N``.

        Flat ordering is ``ancilla * 6N + j * N + site``.
        """
        vec = np.asarray(vec, dtype=np.complex128)
        n6 = N_DIRECTIONS * spec.n_sites
        if vec.shape == (n6,):
            state = cls.zeros(spec, has_ancilla=False)
            state.amps[1] = vec.reshape(N_DIRECTIONS, spec.n_sites)
            return state
        if vec.shape == (2 * n6,):
            return cls(spec, vec.reshape(2, N_DIRECTIONS, spec.n_sites).copy())
        raise ValueError(f"vector length must be {n6} or {2 * n6}, got {vec.shape}")

    def to_vector(self) -> np.ndarray:
        """Flat ``12N`` vector (or ``6N`` when the state carries no ancilla)."""
        if self.has_ancilla:
            return self.amps.reshape(-1).copy()
        return self.amps[1].reshape(-1).copy()

    @property
    def a(self) -> np.ndarray:
        return self.amps[0]

    @property
    def b(self) -> np.ndarray:
        return self.amps[1]

    def norm_squared(self) -> float:
        flat = self.amps.reshape(-1)
        return float(np.vdot(flat, flat).real)

    def copy(self) -> WalkState:
        return WalkState(self.spec, self.amps.copy(), self.has_ancilla)

    def translate(self, d1: int, d2: int) -> WalkState:
        """Shift every amplitude by ``(d1, d2)`` lattice units (periodic)."""
        side = self.spec.side
        grid = self.amps.reshape(2, N_DIRECTIONS, side, side)
        moved = np.roll(grid, shift=(d1, d2), axis=(2, 3))
        return WalkState(self.spec, moved.reshape(self.amps.shape).copy(), self.has_ancilla)


@dataclass(frozen=True)
class TulsiParams:
    """Ancilla mixing angle and the marked site.

    ``delta`` lies in ``[0, pi/2]`` so that ``cos_delta`` is non-negative.
    """

    delta: float
    target: SiteIndex
    cos_delta: float = field(init=False)
    sin_delta: float = field(init=False)

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta <= math.pi / 2 + 1e-15:
            raise ValueError(f"delta must lie in [0, pi/2], got {self.delta}")
        object.__setattr__(self, "cos_delta", math.cos(self.delta))
        object.__setattr__(self, "sin_delta", math.sin(self.delta))

    @classmethod
    def from_cos(cls, cos_delta: float, target: SiteIndex) -> TulsiParams:
        if not 0.0 <= cos_delta <= 1.0:
            raise ValueError(f"cos_delta must lie in [0, 1], got {cos_delta}")
        params = cls(math.acos(cos_delta), target)
        # keep the requested cosine exactly rather than cos(acos(x))
        object.__setattr__(params, "cos_delta", float(cos_delta))
        object.__setattr__(params, "sin_delta", math.sqrt(1.0 - cos_delta * cos_delta))
        return params


def uniform_initial_state(spec: LatticeSpec, has_ancilla: bool = True) -> WalkState:
    """``|1, u_C, u_P>``: every ancilla-1 amplitude equals ``1/sqrt(6N)``."""
    state = WalkState.zeros(spec, has_ancilla)
    state.amps[1] = 1.0 / math.sqrt(N_DIRECTIONS * spec.n_sites)
    return state


def _coin_sum(col: np.ndarray) -> np.ndarray:
    # fixed j = 0..5 order; col has shape (6, ...) and the sum is taken over axis 0
    return col[0] + col[1] + col[2] + col[3] + col[4] + col[5]


@lru_cache(maxsize=8)
def _executor(threads: int) -> ThreadPoolExecutor:
    return ThreadPoolExecutor(max_workers=threads, thread_name_prefix="trisearch-step")


def _chunks(n_sites: int, threads: int) -> list[slice]:
    n_chunks = max(1, min(threads, n_sites // MIN_CHUNK_SITES))
    bounds = np.linspace(0, n_sites, n_chunks + 1).astype(int)
    return [slice(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:])]


def _shift_coin(
    b: np.ndarray,
    side: int,
    target_flat: int | None = None,
    target_column: np.ndarray | None = None,
    threads: int = 1,
) -> np.ndarray:
    """Return ``S (coin (x) I) b`` for the ancilla-1 slice.

    The coin is Grover everywhere except at ``target_flat``, whose mixed
    6-vector is replaced by ``target_column`` before routing.
    """
    table = neighbor_table(side)
    mixed = np.empty_like(b)
    out = np.empty_like(b)

    def mix(sl: slice) -> None:
        blk = b[:, sl]
        mixed[:, sl] = _coin_sum(blk) / 3.0 - blk

    def route(sl: slice) -> None:
        # S|j, n> = |j+3, n + e_j>  <=>  out[j', m] = mixed[j'+3, neighbor(m, j')]
        for jp in range(N_DIRECTIONS):
            out[jp, sl] = mixed[opposite(jp)][table[jp, sl]]

    chunks = _chunks(b.shape[1], threads)
    if len(chunks) == 1:
        mix(chunks[0])
        if target_flat is not None:
            mixed[:, target_flat] = target_column
        route(chunks[0])
        return out

    pool = _executor(threads)
    list(pool.map(mix, chunks))
    if target_flat is not None:
        mixed[:, target_flat] = target_column
    list(pool.map(route, chunks))
    return out


def apply_step_standard(state: WalkState, threads: int = 1) -> WalkState:
    """One step of the unmarked walk ``S (G (x) I)`` on the ancilla-1 slice.

    The ancilla-0 slice is copied through unchanged.
    """
    new = np.empty_like(state.amps)
    new[0] = state.amps[0]
    new[1] = _shift_coin(state.amps[1], state.spec.side, threads=threads)
    return WalkState(state.spec, new, state.has_ancilla)


def apply_step_marked(state: WalkState, target: SiteIndex, threads: int = 1) -> WalkState:
    """One step of ``S C'``: the coin is ``-I`` at ``target`` and Grover elsewhere."""
    b = state.amps[1]
    new = np.empty_like(state.amps)
    new[0] = state.amps[0]
    new[1] = _shift_coin(b, state.spec.side, target.flat, -b[:, target.flat], threads)
    return WalkState(state.spec, new, state.has_ancilla)


def apply_step_tulsi(state: WalkState, params: TulsiParams, threads: int = 1) -> WalkState:
    """One step of the ancilla-controlled search operator.

    Implements ``(-Z (x) I) C(U) (X_delta^dag (x) I) C(R_t) (X_delta (x) I)`` as
    the explicit amplitude map:

    * ``a~[j, n] = -a[j, n] + (1/3) [n = t] (sin^2 d * A - cos d sin d * B)``
    * ``b~ = S (G (x) I) b'`` with
      ``b'[j, n] = b[j, n] + (1/3) [n = t] (sin d cos d * A - cos^2 d * B)``

    where ``A`` and ``B`` are the coin sums of ``a`` and ``b`` at the target.
    """
    t = params.target.flat
    c, s = params.cos_delta, params.sin_delta
    a, b = state.amps[0], state.amps[1]
    sum_a = _coin_sum(a[:, t])
    sum_b = _coin_sum(b[:, t])

    new = np.empty_like(state.amps)
    np.negative(a, out=new[0])
    new[0, :, t] += (sum_a * (s * s) - sum_b * (c * s)) / 3.0

    b_t = b[:, t] + (sum_a * (s * c) - sum_b * (c * c)) / 3.0
    mixed_t = _coin_sum(b_t) / 3.0 - b_t
    new[1] = _shift_coin(b, state.spec.side, t, mixed_t, threads)
    return WalkState(state.spec, new, True)


def success_probability_tulsi(state: WalkState, params: TulsiParams) -> float:
    """``|<delta_1, u_C, t|psi>|^2`` with ``|delta_1> = -sin d |0> + cos d |1>``."""
    t = params.target.flat
    overlap = (
        -params.sin_delta * _coin_sum(state.amps[0, :, t])
        + params.cos_delta * _coin_sum(state.amps[1, :, t])
    ) / math.sqrt(N_DIRECTIONS)
    return float(abs(overlap) ** 2)


def success_probability_position(state: WalkState, target: SiteIndex) -> float:
    """Probability that a position measurement (ancilla-1 slice) yields ``target``."""
    col = state.amps[1, :, target.flat]
    return float(np.sum(col.real**2 + col.imag**2))


def success_probability_coin_uniform(state: WalkState, target: SiteIndex) -> float:
    """``|<1, u_C, t|psi>|^2``, the overlap with the coin-uniform state at the target."""
    return float(abs(_coin_sum(state.amps[1, :, target.flat])) ** 2 / N_DIRECTIONS)
