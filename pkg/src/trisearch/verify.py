"""Oracle-equivalence and invariant checks for small lattices."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import LatticeSpec, enumerate_wavevectors
from .oracle import _guard, build_marked, build_standard, build_tulsi, reference_search_curve
from .search import SearchConfig, run_search
from .spectral import eigenmodes, expected_spectrum, reduced_operator, spectrum_matches
from .walk import TulsiParams, WalkState, apply_step_marked, apply_step_standard, apply_step_tulsi

__all__ = ["CheckResult", "random_state", "run_checks"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def random_state(spec: LatticeSpec, rng: np.random.Generator, ancilla: bool = True) -> WalkState:
    shape = (2, 6, spec.n_sites)
    amps = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    if not ancilla:
        amps[0] = 0.0
    amps /= np.linalg.norm(amps)
    return WalkState(spec, amps, ancilla)


def run_checks(spec: LatticeSpec, n_states: int = 20, seed: int = 0, delta: float = 0.7) -> list[CheckResult]:
    """Dense-vs-sparse, unitarity, spectrum and coefficient checks at oracle scale."""
    _guard(spec)
    rng = np.random.default_rng(seed)
    target = spec.site(spec.side // 2, spec.side - 1)
    params = TulsiParams(delta, target)
    results = []

    dense_u = build_standard(spec)
    dense_m = build_marked(spec, target)
    dense_t = build_tulsi(spec, params)
    for name, op, tol in (("U", dense_u, 1e-10), ("U'", dense_m, 1e-10), ("U''", dense_t, 1e-10)):
        res = op.unitarity_residual()
        results.append(CheckResult(f"unitarity {name}", res < tol, f"residual {res:.3e} (tol {tol:g})"))

    worst = {"U": 0.0, "U'": 0.0, "U''": 0.0}
    for _ in range(n_states):
        plain = random_state(spec, rng, ancilla=False)
        full = random_state(spec, rng)
        v6 = plain.to_vector()
        worst["U"] = max(worst["U"], np.max(np.abs(apply_step_standard(plain).to_vector() - dense_u @ v6)))
        worst["U'"] = max(worst["U'"], np.max(np.abs(apply_step_marked(plain, target).to_vector() - dense_m @ v6)))
        worst["U''"] = max(
            worst["U''"], np.max(np.abs(apply_step_tulsi(full, params).to_vector() - dense_t @ full.to_vector()))
        )
    for name, err in worst.items():
        results.append(CheckResult(f"dense vs sparse {name}", err <= 1e-12, f"max abs error {err:.3e} over {n_states} states"))

    wavevectors = enumerate_wavevectors(spec)
    union = np.concatenate([expected_spectrum(reduced_operator(k).theta) for k in wavevectors])
    dense_vals = np.linalg.eigvals(dense_u.matrix)
    ok = spectrum_matches(dense_vals, union, tol=1e-8)
    results.append(CheckResult("full spectrum = union of reduced spectra", ok, f"{len(dense_vals)} eigenvalues"))

    bad = [
        (k.k1, k.k2)
        for k in wavevectors
        if not spectrum_matches(np.linalg.eigvals(reduced_operator(k).matrix), expected_spectrum(reduced_operator(k).theta))
    ]
    results.append(CheckResult("reduced spectrum {1,1,-1,-1,e^(+-i theta)}", not bad, f"mismatches at {bad}" if bad else f"{len(wavevectors)} wavevectors"))

    dev = 0.0
    for k in wavevectors[1:]:
        m = eigenmodes(reduced_operator(k), delta)
        dev = max(
            dev,
            abs(m.a_k - math.cos(delta) / math.sqrt(2)),
            abs(m.b_k + math.sin(delta) / math.sqrt(2)),
            abs(abs(m.overlap_minus) - 1 / math.sqrt(2)),
            float(np.max(np.abs(m.overlap_trivial))),
        )
    results.append(CheckResult("a_k, b_k constancy", dev < 1e-10, f"max deviation {dev:.3e}"))

    steps = 100
    sparse = run_search(SearchConfig(spec, target=target, delta=delta, max_steps=steps, stop_at_peak=False)).probs
    dense = reference_search_curve(spec, params, steps)
    err = float(np.max(np.abs(sparse - dense)))
    results.append(CheckResult("search curve vs dense reference", err <= 1e-10, f"max abs error {err:.3e} over {steps} steps"))
    return results
