import numpy as np
import pytest

from trisearch.lattice import LatticeSpec
from trisearch.verify import random_state

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def make_state(rng):
    def _make(side, ancilla=True):
        return random_state(LatticeSpec(side), rng, ancilla)

    return _make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
