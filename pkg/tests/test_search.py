import math
import warnings

import numpy as np
import pytest

from trisearch.lattice import LatticeSpec
from trisearch.oracle import reference_search_curve
from trisearch.search import (
    FitError,
    NoPeakWarning,
    SearchConfig,
    auto_cos_delta,
    calibrate_c_delta,
    default_max_steps,
    find_first_peak,
    plateau_study,
    run_search,
    sweep_scaling,
)


@pytest.mark.parametrize(
    "probs, window, expected",
    [
        ([0, 1, 2, 1], 1, 2),
        ([0, 1, 1, 0], 1, 1),  # plateau resolves to the earliest index
        ([3, 2, 1, 0], 1, None),
        ([0, 1, 2, 3], 1, None),
        ([5, 4, 5, 3], 1, 2),  # t = 0 is never a peak
        ([0, 2, 1, 3, 2, 4, 3, 2, 1, 0.5], 2, 5),
        ([0, 2, 1, 3, 2, 4, 3, 2, 1, 0.5], 1, 1),
    ],
)
def test_find_first_peak(probs, window, expected):
    assert find_first_peak(probs, window) == expected


def test_auto_rule():
    assert auto_cos_delta(400) == pytest.approx(1 / math.sqrt(math.log2(400)))
    assert auto_cos_delta(4, c_delta=10) == 1.0
    assert default_max_steps(400) == math.ceil(10 * math.sqrt(400 * math.log2(400)))


def test_config_validation():
    spec = LatticeSpec(5)
    with pytest.raises(ValueError):
        SearchConfig(spec, variant="grid")
    with pytest.raises(ValueError):
        SearchConfig(spec, max_steps=0)
    assert SearchConfig(spec).resolved_target == spec.site(0, 0)
    assert SearchConfig(spec, variant="marked").resolved_peak_window == 2
    assert SearchConfig(spec).resolved_peak_window == 1


@pytest.mark.parametrize("variant", ["marked", "tulsi"])
def test_single_step_has_no_peak(variant):
    with pytest.warns(NoPeakWarning):
        tr = run_search(SearchConfig(LatticeSpec(6), variant=variant, max_steps=1))
    assert len(tr.probs) == 2
    assert not tr.peak_found and tr.p_max is None


@pytest.mark.parametrize("side, delta", [(5, 0.3), (12, 1.1), (20, None)])
def test_first_probability_exact(side, delta):
    spec = LatticeSpec(side)
    cfg = SearchConfig(spec, delta=delta, max_steps=2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoPeakWarning)
        tr = run_search(cfg)
    cos_d = cfg.tulsi_params.cos_delta
    assert abs(tr.probs[0] - cos_d**2 / spec.n_sites) < 1e-14


def test_matches_dense_reference():
    spec = LatticeSpec(3)
    cfg = SearchConfig(spec, target=spec.site(2, 2), delta=0.8, max_steps=100, stop_at_peak=False)
    dense = reference_search_curve(spec, cfg.tulsi_params, 100)
    assert np.max(np.abs(run_search(cfg).probs - dense)) < 1e-10


@pytest.mark.parametrize("variant", ["marked", "tulsi"])
def test_translation_covariance(variant):
    spec = LatticeSpec(12)
    curves = [
        run_search(SearchConfig(spec, target=spec.site(*t), variant=variant, max_steps=150, stop_at_peak=False)).probs
        for t in [(0, 0), (5, 9), (11, 3)]
    ]
    assert np.array_equal(curves[0], curves[1])
    assert np.array_equal(curves[0], curves[2])


def test_trace_invariants():
    for variant in ("marked", "tulsi"):
        tr = run_search(SearchConfig(LatticeSpec(16), variant=variant))
        p = tr.probs
        assert np.all((p >= 0) & (p <= 1 + 1e-12))
        assert p[tr.t_max] >= p[tr.t_max - 1] and p[tr.t_max] >= p[tr.t_max + 1]


def test_marked_curve_rises_and_falls_n400():
    spec = LatticeSpec(20)
    n = spec.n_sites
    horizon = math.ceil(4 * math.sqrt(n * math.log2(n)))
    tr = run_search(SearchConfig(spec, variant="marked", max_steps=horizon, stop_at_peak=False))
    assert tr.peak_found and tr.t_max < horizon
    assert tr.probs[: tr.t_max].min() < tr.p_max
    assert tr.probs[tr.t_max :].min() < tr.p_max
    assert tr.coin_uniform is not None and len(tr.coin_uniform) == len(tr.probs)


def test_tulsi_later_and_higher_n400():
    spec = LatticeSpec(20)
    marked = run_search(SearchConfig(spec, variant="marked"))
    tulsi = run_search(SearchConfig(spec, variant="tulsi"))
    assert tulsi.t_max > marked.t_max
    assert tulsi.p_max > marked.p_max


def test_tulsi_curve_is_smoother_than_marked():
    spec = LatticeSpec(20)
    marked = run_search(SearchConfig(spec, variant="marked", max_steps=60, stop_at_peak=False)).probs
    tulsi = run_search(SearchConfig(spec, variant="tulsi", max_steps=60, stop_at_peak=False)).probs
    sign_changes = lambda p: int(np.sum(np.diff(np.sign(np.diff(p))) != 0))  # noqa: E731
    assert sign_changes(tulsi) < sign_changes(marked)


def test_sweep_small():
    fit = sweep_scaling([8, 12, 16, 20])
    assert fit.slope > 0
    assert 0 <= fit.r_squared <= 1
    assert [n for n, _ in fit.points] == [64, 144, 256, 400]
    assert [t for _, t in fit.points] == sorted(t for _, t in fit.points)


def test_sweep_parallel_workers_keep_order():
    serial = sweep_scaling([8, 10, 12])
    parallel = sweep_scaling([8, 10, 12], workers=3)
    assert serial.points == parallel.points


def test_sweep_needs_three_points():
    with pytest.raises(FitError, match="fit requires ≥ 3 points"):
        sweep_scaling([10])
    with pytest.raises(ValueError):
        sweep_scaling([3, 8, 10])
    with pytest.raises(ValueError):
        sweep_scaling([10, 8, 12])


def test_plateau_smallest_lattice_sits_above_large_n_values():
    small = dict(plateau_study([4, 6]))
    assert set(small) == {16, 36}
    large = dict(plateau_study([46, 60]))
    assert small[16] > max(large.values())


def test_calibration_scan_prefers_unit_constant():
    best, scan = calibrate_c_delta(side=30)
    assert set(scan) == {0.75, 1.0, 1.25, 1.5}
    assert best == 1.0
    # larger constants mean larger cos d and lower plateau
    values = [scan[c] for c in sorted(scan)]
    assert values == sorted(values, reverse=True)
