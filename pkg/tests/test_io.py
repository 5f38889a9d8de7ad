import math

import numpy as np

from trisearch.io import (
    fmt,
    load_state_npz,
    read_state_csv,
    save_state_npz,
    write_spectrum_csv,
    write_state_csv,
    write_sweep_csv,
    write_trace_csv,
)
from trisearch.lattice import LatticeSpec
from trisearch.spectral import spectrum_table


def test_fmt_round_trips():
    for x in (1 / 3, math.pi, 1e-300, -2.5e17, 0.1 + 0.2):
        assert float(fmt(x)) == x
    assert fmt(7) == "7"
    assert fmt(math.inf) == "inf"
    assert fmt(None) == ""


def test_state_csv_round_trip(tmp_path, make_state):
    state = make_state(4)
    path = write_state_csv(tmp_path / "s.csv", state)
    lines = path.read_text().splitlines()
    assert lines[0] == "ancilla,j,n1,n2,re,im"
    assert len(lines) == 1 + 12 * 16
    back = read_state_csv(path)
    assert np.array_equal(back.amps, state.amps)


def test_state_npz_round_trip(tmp_path, make_state):
    state = make_state(3, ancilla=False)
    back = load_state_npz(save_state_npz(tmp_path / "s.npz", state))
    assert np.array_equal(back.amps, state.amps)
    assert back.has_ancilla is False


def test_trace_and_sweep_csv(tmp_path):
    p = write_trace_csv(tmp_path / "t.csv", np.array([0.25, 0.5]))
    assert p.read_text() == "step,prob\n0,0.25\n1,0.5\n"
    p = write_trace_csv(tmp_path / "m.csv", np.array([0.25]), np.array([0.125]))
    assert p.read_text().splitlines()[0] == "step,prob,coin_uniform_overlap"
    p = write_sweep_csv(tmp_path / "s.csv", [(10, 100, 24, 0.75), (12, 144, None, None)])
    lines = p.read_text().splitlines()
    assert lines[0] == "side,N,t_max,p_max,sqrt_NlogN"
    assert lines[2].startswith("12,144,,,")
    assert float(lines[1].split(",")[-1]) == math.sqrt(100 * math.log2(100))


def test_spectrum_csv(tmp_path):
    rows = spectrum_table(LatticeSpec(6))
    lines = write_spectrum_csv(tmp_path / "k.csv", rows).read_text().splitlines()
    assert len(lines) == 37
    assert lines[1].endswith(",inf")
