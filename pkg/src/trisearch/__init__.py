"""Quantum-walk spatial search on a periodic triangular lattice."""

__version__ = "0.1.0"

from .lattice import LatticeSpec, SiteIndex, WaveVector, enumerate_wavevectors, neighbor
from .search import (
    ScalingFit,
    SearchConfig,
    SearchTrace,
    calibrate_c_delta,
    plateau_study,
    run_search,
    sweep_scaling,
)
from .spectral import (
    alpha_estimate,
    dispersion,
    eigenmodes,
    lattice_sum_exact,
    lattice_sum_quadrature,
    reduced_operator,
)
from .walk import (
    TulsiParams,
    WalkState,
    apply_step_marked,
    apply_step_standard,
    apply_step_tulsi,
    grover_coin,
    success_probability_coin_uniform,
    success_probability_position,
    success_probability_tulsi,
    uniform_initial_state,
)

__all__ = [
    "LatticeSpec",
    "ScalingFit",
    "SearchConfig",
    "SearchTrace",
    "SiteIndex",
    "TulsiParams",
    "WalkState",
    "WaveVector",
    "alpha_estimate",
    "apply_step_marked",
    "apply_step_standard",
    "apply_step_tulsi",
    "calibrate_c_delta",
    "dispersion",
    "eigenmodes",
    "enumerate_wavevectors",
    "grover_coin",
    "lattice_sum_exact",
    "lattice_sum_quadrature",
    "neighbor",
    "plateau_study",
    "reduced_operator",
    "run_search",
    "success_probability_coin_uniform",
    "success_probability_position",
    "success_probability_tulsi",
    "sweep_scaling",
    "uniform_initial_state",
]
