import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trisearch.lattice import (
    LatticeSpec,
    SiteIndex,
    enumerate_wavevectors,
    neighbor,
    neighbor_table,
    opposite,
)


@st.composite
def site_and_side(draw):
    side = draw(st.integers(2, 30))
    n1 = draw(st.integers(0, side - 1))
    n2 = draw(st.integers(0, side - 1))
    return LatticeSpec(side), n1, n2


def test_spec_basics():
    spec = LatticeSpec(6)
    assert spec.n_sites == 36
    assert spec.site(2, 3).flat == 15
    assert spec.site_from_flat(15) == SiteIndex(2, 3, 15)


@pytest.mark.parametrize("side", [1, 0, -3])
def test_degenerate_side_rejected(side):
    with pytest.raises(ValueError, match="side must be ≥ 2"):
        LatticeSpec(side)


def test_site_out_of_range():
    with pytest.raises(ValueError):
        LatticeSpec(4).site(4, 0)


def test_neighbor_examples():
    spec = LatticeSpec(6)
    assert neighbor(spec, spec.site(2, 3), 0) == spec.site(3, 3)
    assert neighbor(spec, spec.site(5, 0), 1) == spec.site(0, 5)
    there = neighbor(spec, spec.site(2, 3), 0)
    assert neighbor(spec, there, 3) == spec.site(2, 3)


def test_all_six_displacements():
    spec = LatticeSpec(6)
    s = spec.site(2, 3)
    got = [(neighbor(spec, s, j).n1, neighbor(spec, s, j).n2) for j in range(6)]
    assert got == [(3, 3), (3, 2), (2, 2), (1, 3), (1, 4), (2, 4)]


def test_opposite_is_involution():
    for j in range(6):
        assert opposite(opposite(j)) == j
        assert opposite(j) != j


@given(site_and_side(), st.integers(0, 5))
def test_step_and_back(args, j):
    spec, n1, n2 = args
    s = spec.site(n1, n2)
    assert neighbor(spec, neighbor(spec, s, j), opposite(j)) == s


@given(site_and_side())
def test_closed_triangles(args):
    spec, n1, n2 = args
    s = spec.site(n1, n2)
    for path in ((0, 2, 4), (1, 3, 5)):
        cur = s
        for j in path:
            cur = neighbor(spec, cur, j)
        assert cur == s


@pytest.mark.parametrize("side", [2, 3, 5, 8])
def test_neighbor_is_permutation(side):
    table = neighbor_table(side)
    for j in range(6):
        assert sorted(table[j]) == list(range(side * side))


def test_neighbor_table_matches_scalar():
    spec = LatticeSpec(5)
    table = neighbor_table(5)
    for s in spec.sites():
        for j in range(6):
            assert table[j, s.flat] == neighbor(spec, s, j).flat


def test_enumerate_side2():
    ks = enumerate_wavevectors(LatticeSpec(2))
    assert [(k.k1, k.k2) for k in ks] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_enumerate_side6():
    ks = enumerate_wavevectors(LatticeSpec(6))
    assert len(ks) == 36
    assert ks[0].is_zero
    assert sum(not k.is_zero for k in ks) == 35
    assert len({(k.k1, k.k2) for k in ks}) == 36
    k30 = next(k for k in ks if (k.k1, k.k2) == (3, 0))
    assert k30.ktilde1 == pytest.approx(math.pi, abs=1e-15)
    assert k30.ktilde2 == 0.0
    assert all(0 <= k.ktilde1 < 2 * math.pi and 0 <= k.ktilde2 < 2 * math.pi for k in ks)
