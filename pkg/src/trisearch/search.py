"""Search experiments: single runs, first-peak detection, sweeps and fits."""

from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy import stats

from .lattice import LatticeSpec, SiteIndex
from .walk import (
    TulsiParams,
    apply_step_marked,
    apply_step_tulsi,
    success_probability_coin_uniform,
    success_probability_position,
    success_probability_tulsi,
    uniform_initial_state,
)

__all__ = [
    "FitError",
    "NoPeakWarning",
    "ScalingFit",
    "SearchConfig",
    "SearchTrace",
    "auto_cos_delta",
    "calibrate_c_delta",
    "default_max_steps",
    "find_first_peak",
    "plateau_study",
    "run_search",
    "sweep_scaling",
]

log = logging.getLogger(__name__)

Variant = Literal["marked", "tulsi"]
VARIANTS: tuple[str, ...] = ("marked", "tulsi")

PLATEAU_REFERENCE = 0.773
CALIBRATION_GRID = (0.75, 1.0, 1.25, 1.5)


class NoPeakWarning(UserWarning):
    """No first maximum was found within ``max_steps``."""


class FitError(ValueError):
    pass


def auto_cos_delta(n_sites: int, c_delta: float = 1.0) -> float:
    """``cos d = min(1, c_delta / sqrt(log2 N))``."""
    return min(1.0, c_delta / math.sqrt(math.log2(n_sites)))


def default_max_steps(n_sites: int) -> int:
    return math.ceil(10.0 * math.sqrt(n_sites * math.log2(n_sites)))


@dataclass(frozen=True)
class SearchConfig:
    """One search run.

    ``delta=None`` selects the automatic rule driven by ``c_delta``.
    ``peak_window`` is the moving-average width used by peak detection; the
    default is 1 (raw curve) for ``tulsi`` and 2 for ``marked``, whose
    probability zigzags between even and odd steps.
    """

    spec: LatticeSpec
    target: SiteIndex | None = None
    variant: Variant = "tulsi"
    delta: float | None = None
    c_delta: float = 1.0
    max_steps: int | None = None
    peak_window: int | None = None
    stop_at_peak: bool = True
    threads: int = 1

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.max_steps is not None and self.max_steps < 1:
            raise ValueError("max_steps must be ≥ 1")
        if self.peak_window is not None and self.peak_window < 1:
            raise ValueError("peak_window must be ≥ 1")
        if self.c_delta <= 0:
            raise ValueError("c_delta must be positive")

    @property
    def resolved_target(self) -> SiteIndex:
        return self.target if self.target is not None else self.spec.site(0, 0)

    @property
    def resolved_delta(self) -> float:
        if self.delta is not None:
            return float(self.delta)
        return math.acos(auto_cos_delta(self.spec.n_sites, self.c_delta))

    @property
    def tulsi_params(self) -> TulsiParams:
        if self.delta is not None:
            return TulsiParams(float(self.delta), self.resolved_target)
        return TulsiParams.from_cos(auto_cos_delta(self.spec.n_sites, self.c_delta), self.resolved_target)

    @property
    def resolved_max_steps(self) -> int:
        return self.max_steps if self.max_steps is not None else default_max_steps(self.spec.n_sites)

    @property
    def resolved_peak_window(self) -> int:
        if self.peak_window is not None:
            return self.peak_window
        return 2 if self.variant == "marked" else 1

    def describe(self) -> dict:
        params = self.tulsi_params
        return {
            "side": self.spec.side,
            "n_sites": self.spec.n_sites,
            "target": [self.resolved_target.n1, self.resolved_target.n2],
            "variant": self.variant,
            "delta_rule": "explicit" if self.delta is not None else "auto",
            "delta": params.delta,
            "cos_delta": params.cos_delta,
            "c_delta": self.c_delta,
            "max_steps": self.resolved_max_steps,
            "peak_window": self.resolved_peak_window,
            "stop_at_peak": self.stop_at_peak,
            "log_base": 2,
        }


@dataclass
class SearchTrace:
    """Per-step success probability and the detected first maximum.

    For the ``marked`` variant ``probs`` is the position-measurement
    probability and ``coin_uniform`` the overlap with ``|u_C, t>``.
    """

    probs: np.ndarray
    t_max: int | None
    p_max: float | None
    variant: str
    config: SearchConfig
    coin_uniform: np.ndarray | None = None

    @property
    def peak_found(self) -> bool:
        return self.t_max is not None


def _smoothed(probs: np.ndarray, window: int) -> np.ndarray:
    if window == 1:
        return probs
    return np.convolve(probs, np.ones(window) / window, mode="valid")


def find_first_peak(probs: Sequence[float], window: int = 1) -> int | None:
    """Index of the first local maximum, or None.

    A peak is the first ``t >= 1`` with ``m[t] >= m[t-1]`` and ``m[t] > m[t+1]``
    where ``m`` is the ``window``-point forward moving average of ``probs``.
    A flat top resolves to its earliest index.  For ``window > 1`` the returned index is the largest raw value inside the
    winning window (earliest on ties).
    """
    p = np.asarray(probs, dtype=float)
    m = _smoothed(p, window)
    for t in range(1, len(m) - 1):
        if m[t] >= m[t - 1] and m[t] > m[t + 1]:
            while t > 1 and m[t - 1] == m[t]:
                t -= 1
            return t + int(np.argmax(p[t : t + window]))
    return None


def _peak_candidate_ready(probs: list[float], window: int) -> int | None:
    # check only the newest decidable candidate t = len - 1 - window
    t = len(probs) - 1 - window
    if t < 1:
        return None
    seg = np.asarray(probs[t - 1 :], dtype=float)
    m = _smoothed(seg, window)
    if m[1] >= m[0] and m[1] > m[2]:
        # rescan once so flat tops get the same tie-break as find_first_peak
        return find_first_peak(probs, window)
    return None


def run_search(config: SearchConfig) -> SearchTrace:
    """Evolve from ``|1, u_C, u_P>`` and record the success probability each step.

    Stops at the first detected maximum unless ``stop_at_peak`` is False, and
    at ``max_steps`` otherwise; a missing peak emits :class:`NoPeakWarning`.
    """
    spec = config.spec
    target = config.resolved_target
    window = config.resolved_peak_window
    tulsi = config.variant == "tulsi"
    params = config.tulsi_params

    state = uniform_initial_state(spec, has_ancilla=tulsi)
    if tulsi:
        measure = lambda s: success_probability_tulsi(s, params)  # noqa: E731
        step = lambda s: apply_step_tulsi(s, params, threads=config.threads)  # noqa: E731
    else:
        measure = lambda s: success_probability_position(s, target)  # noqa: E731
        step = lambda s: apply_step_marked(s, target, threads=config.threads)  # noqa: E731

    probs = [measure(state)]
    overlap = None if tulsi else [success_probability_coin_uniform(state, target)]
    t_max = None
    for _ in range(config.resolved_max_steps):
        state = step(state)
        probs.append(measure(state))
        if overlap is not None:
            overlap.append(success_probability_coin_uniform(state, target))
        if t_max is None:
            t_max = _peak_candidate_ready(probs, window)
            if t_max is not None and config.stop_at_peak:
                break

    probs_arr = np.asarray(probs)
    if t_max is None:
        warnings.warn(
            f"no peak within {config.resolved_max_steps} steps (side={spec.side}, {config.variant})",
            NoPeakWarning,
            stacklevel=2,
        )
    return SearchTrace(
        probs=probs_arr,
        t_max=t_max,
        p_max=None if t_max is None else float(probs_arr[t_max]),
        variant=config.variant,
        config=config,
        coin_uniform=None if overlap is None else np.asarray(overlap),
    )


@dataclass
class ScalingFit:
    """Least-squares fit ``t_max = slope * sqrt(N log2 N) + intercept``."""

    points: list[tuple[int, int]]
    slope: float
    intercept: float
    r_squared: float
    traces: list[SearchTrace] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "points": [[n, t] for n, t in self.points],
            "abscissa": "sqrt(N*log2(N))",
            "log_base": 2,
        }


def sqrt_n_log_n(n_sites: int) -> float:
    return math.sqrt(n_sites * math.log2(n_sites))


def _check_sides(sides: Sequence[int]) -> list[int]:
    sides = [int(s) for s in sides]
    if any(s < 4 for s in sides):
        raise ValueError("every side in a sweep must be ≥ 4")
    if sides != sorted(sides) or len(set(sides)) != len(sides):
        raise ValueError("sides must be strictly ascending")
    return sides


def _run_many(configs: list[SearchConfig], workers: int) -> list[SearchTrace]:
    if workers <= 1:
        return [run_search(c) for c in configs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_search, configs))  # map keeps input order


def run_sweep(
    sides: Sequence[int],
    variant: Variant = "tulsi",
    delta: float | None = None,
    c_delta: float = 1.0,
    threads: int = 1,
    workers: int = 1,
) -> list[SearchTrace]:
    """One :func:`run_search` per side, ordered by ``N``."""
    configs = [
        SearchConfig(LatticeSpec(s), variant=variant, delta=delta, c_delta=c_delta, threads=threads)
        for s in _check_sides(sides)
    ]
    traces = _run_many(configs, workers)
    last = -1
    for tr in traces:
        if tr.t_max is None:
            continue
        if tr.t_max < last:
            log.warning("t_max decreased to %d at side=%d (previous %d)", tr.t_max, tr.config.spec.side, last)
        last = tr.t_max
    return traces


def fit_scaling(traces: Sequence[SearchTrace]) -> ScalingFit:
    good = [tr for tr in traces if tr.t_max is not None]
    for tr in traces:
        if tr.t_max is None:
            warnings.warn(f"side={tr.config.spec.side} excluded from fit: no peak", NoPeakWarning, stacklevel=2)
    if len(good) < 3:
        raise FitError("fit requires ≥ 3 points")
    n = np.array([tr.config.spec.n_sites for tr in good])
    x = np.sqrt(n * np.log2(n))
    y = np.array([tr.t_max for tr in good], dtype=float)
    res = stats.linregress(x, y)
    return ScalingFit(
        points=[(int(ni), int(ti)) for ni, ti in zip(n, y)],
        slope=float(res.slope),
        intercept=float(res.intercept),
        r_squared=float(res.rvalue**2),
        traces=list(traces),
    )


def sweep_scaling(
    sides: Sequence[int],
    variant: Variant = "tulsi",
    delta: float | None = None,
    c_delta: float = 1.0,
    threads: int = 1,
    workers: int = 1,
) -> ScalingFit:
    """Run every side and fit ``t_max`` against ``sqrt(N log2 N)``.

    Sides without a peak are dropped with a warning; fewer than three usable
    points raise :class:`FitError`.
    """
    return fit_scaling(run_sweep(sides, variant, delta, c_delta, threads, workers))


def plateau_study(
    sides: Sequence[int],
    delta: float | None = None,
    c_delta: float = 1.0,
    threads: int = 1,
    workers: int = 1,
) -> list[tuple[int, float]]:
    """``(N, p_max)`` of the Tulsi search for each side (sides without a peak are skipped)."""
    traces = run_sweep(sides, "tulsi", delta, c_delta, threads, workers)
    return [(tr.config.spec.n_sites, tr.p_max) for tr in traces if tr.p_max is not None]


def calibrate_c_delta(
    side: int = 50,
    candidates: Sequence[float] = CALIBRATION_GRID,
    reference: float = PLATEAU_REFERENCE,
    threads: int = 1,
) -> tuple[float, dict[float, float]]:
    """Pick the ``c_delta`` whose Tulsi ``p_max`` at ``side`` is closest to ``reference``."""
    spec = LatticeSpec(side)
    scan = {}
    for c in candidates:
        tr = run_search(SearchConfig(spec, variant="tulsi", c_delta=c, threads=threads))
        if tr.p_max is not None:
            scan[float(c)] = tr.p_max
    if not scan:
        raise FitError("no candidate produced a peak")
    best = min(scan, key=lambda c: abs(scan[c] - reference))
    return best, scan
