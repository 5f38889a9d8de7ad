import math

import numpy as np
import pytest

from trisearch.lattice import LatticeSpec, enumerate_wavevectors
from trisearch.oracle import (
    TooLarge,
    build_marked,
    build_standard,
    build_tulsi,
    reference_search_curve,
    shift_matrix,
    target_reflection,
    tulsi_factors,
)
from trisearch.search import SearchConfig, run_search
from trisearch.spectral import expected_spectrum, reduced_operator, spectrum_matches
from trisearch.walk import TulsiParams, apply_step_tulsi


def test_standard_side2_shape_and_permutation():
    spec = LatticeSpec(2)
    s = shift_matrix(spec)
    assert s.shape == (24, 24)
    assert np.all(np.count_nonzero(s, axis=1) == 1)
    assert np.all(np.count_nonzero(s, axis=0) == 1)
    u = build_standard(spec)
    assert u.dim == 24
    uniform = np.full(24, 1 / math.sqrt(24))
    assert np.allclose(u @ uniform, uniform, atol=1e-14)


def test_standard_spectrum_is_union_of_blocks():
    spec = LatticeSpec(3)
    vals = np.linalg.eigvals(build_standard(spec).matrix)
    assert np.allclose(np.abs(vals), 1, atol=1e-10)
    union = np.concatenate([expected_spectrum(reduced_operator(k).theta) for k in enumerate_wavevectors(spec)])
    assert spectrum_matches(vals, union, tol=1e-8)


def test_marked_equals_u_times_reflection():
    spec = LatticeSpec(3)
    t = spec.site(2, 0)
    lhs = build_marked(spec, t).matrix
    rhs = build_standard(spec).matrix @ target_reflection(spec, t)
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_tulsi_cos_one_block_is_marked():
    spec = LatticeSpec(3)
    t = spec.site(1, 1)
    m = build_tulsi(spec, TulsiParams(0.0, t)).matrix
    n6 = 6 * spec.n_sites
    assert np.max(np.abs(m[n6:, n6:] - build_marked(spec, t).matrix)) < 1e-12
    assert np.max(np.abs(m[:n6, n6:])) == 0
    assert np.max(np.abs(m[:n6, :n6] + np.eye(n6))) < 1e-15


@pytest.mark.parametrize("delta", [0.0, 0.4, 1.2, math.pi / 2])
def test_tulsi_unitary(delta):
    spec = LatticeSpec(3)
    assert build_tulsi(spec, TulsiParams(delta, spec.site(0, 2))).unitarity_residual() < 1e-10


def test_tulsi_factors_are_each_unitary():
    spec = LatticeSpec(2)
    for name, f in tulsi_factors(spec, TulsiParams(0.8, spec.site(1, 0))).items():
        assert np.max(np.abs(f.conj().T @ f - np.eye(f.shape[0]))) < 1e-12, name


def test_reflection_conjugation_closed_form():
    # (X^dag (x) I) C(R) (X (x) I) = I - 2 |t_bar><t_bar|
    from trisearch.oracle import effective_target

    spec = LatticeSpec(2)
    params = TulsiParams(0.9, spec.site(1, 1))
    f = tulsi_factors(spec, params)
    conj = f["x_delta_dagger"] @ f["controlled_reflection"] @ f["x_delta"]
    tbar = effective_target(spec, params)
    assert np.max(np.abs(conj - (np.eye(len(tbar)) - 2 * np.outer(tbar, tbar)))) < 1e-12


def test_tulsi_matvec_agreement(make_state, rng):
    spec = LatticeSpec(3)
    params = TulsiParams(float(rng.uniform(0, math.pi / 2)), spec.site(2, 1))
    dense = build_tulsi(spec, params)
    for _ in range(50):
        state = make_state(3)
        err = np.max(np.abs(apply_step_tulsi(state, params).to_vector() - dense @ state.to_vector()))
        assert err < 1e-12


def test_reference_curve_start_and_length():
    spec = LatticeSpec(3)
    params = TulsiParams(0.7, spec.site(0, 0))
    assert len(reference_search_curve(spec, params, 0)) == 1
    assert reference_search_curve(spec, params, 0)[0] == pytest.approx(math.cos(0.7) ** 2 / 9, abs=1e-15)


def test_reference_curve_matches_sparse_engine():
    spec = LatticeSpec(3)
    params = TulsiParams(0.5, spec.site(1, 2))
    dense = reference_search_curve(spec, params, 100)
    sparse = run_search(SearchConfig(spec, target=params.target, delta=0.5, max_steps=100, stop_at_peak=False)).probs
    assert np.max(np.abs(dense - sparse)) < 1e-10


def test_memory_guard():
    spec = LatticeSpec(9)
    with pytest.raises(TooLarge):
        build_standard(spec)
    with pytest.raises(TooLarge):
        build_tulsi(spec, TulsiParams(0.1, spec.site(0, 0)))
    with pytest.raises(TooLarge):
        reference_search_curve(spec, TulsiParams(0.1, spec.site(0, 0)), 3)
