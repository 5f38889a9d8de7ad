"""Triangular Bravais lattice on a periodic ``side x side`` torus.

Sites are addressed by integer pairs ``(n1, n2)`` along the two primitive
vectors (60 degrees apart).  No geometry is ever stored as floats; every
displacement is integer index arithmetic modulo ``side``.

Flat layout is row-major: ``flat = n1 * side + n2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

__all__ = [
    "DISPLACEMENTS",
    "N_DIRECTIONS",
    "LatticeSpec",
    "SiteIndex",
    "WaveVector",
    "enumerate_wavevectors",
    "neighbor",
    "neighbor_table",
    "opposite",
]

N_DIRECTIONS = 6

# (dn1, dn2) for direction j; j and j+3 are inverse displacements.
DISPLACEMENTS: tuple[tuple[int, int], ...] = (
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
)


@dataclass(frozen=True)
class LatticeSpec:
    """Periodic triangular lattice with ``side**2`` sites."""

    side: int
    n_sites: int = field(init=False)

    def __post_init__(self) -> None:
        if isinstance(self.side, bool) or not isinstance(self.side, (int, np.integer)):
            raise TypeError(f"side must be an integer, got {type(self.side).__name__}")
        if self.side < 2:
            raise ValueError("side must be ≥ 2")
        object.__setattr__(self, "side", int(self.side))
        object.__setattr__(self, "n_sites", self.side * self.side)

    def site(self, n1: int, n2: int) -> SiteIndex:
        return SiteIndex.from_coords(self, n1, n2)

    def site_from_flat(self, flat: int) -> SiteIndex:
        if not 0 <= flat < self.n_sites:
            raise ValueError(f"flat index {flat} out of range for N={self.n_sites}")
        n1, n2 = divmod(int(flat), self.side)
        return SiteIndex(n1, n2, int(flat))

    def sites(self) -> Iterator[SiteIndex]:
        for flat in range(self.n_sites):
            yield self.site_from_flat(flat)

    @property
    def log2_n(self) -> float:
        return math.log2(self.n_sites)


@dataclass(frozen=True)
class SiteIndex:
    n1: int
    n2: int
    flat: int

    @classmethod
    def from_coords(cls, spec: LatticeSpec, n1: int, n2: int) -> SiteIndex:
        if not (0 <= n1 < spec.side and 0 <= n2 < spec.side):
            raise ValueError(f"site ({n1}, {n2}) outside a side-{spec.side} lattice")
        return cls(int(n1), int(n2), int(n1) * spec.side + int(n2))


@dataclass(frozen=True)
class WaveVector:
    """Reciprocal-lattice point ``k1 g1 + k2 g2`` with reduced angles ``2 pi k / side``."""

    k1: int
    k2: int
    ktilde1: float
    ktilde2: float

    @classmethod
    def from_ints(cls, spec: LatticeSpec, k1: int, k2: int) -> WaveVector:
        if not (0 <= k1 < spec.side and 0 <= k2 < spec.side):
            raise ValueError(f"wavevector ({k1}, {k2}) outside a side-{spec.side} zone")
        return cls(k1, k2, 2.0 * math.pi * k1 / spec.side, 2.0 * math.pi * k2 / spec.side)

    @property
    def is_zero(self) -> bool:
        return self.k1 == 0 and self.k2 == 0


def opposite(j: int) -> int:
    return (j + 3) % N_DIRECTIONS


def neighbor(spec: LatticeSpec, s: SiteIndex, j: int) -> SiteIndex:
    """Site reached from ``s`` by one step along direction ``j`` (periodic)."""
    d1, d2 = DISPLACEMENTS[j]
    return spec.site((s.n1 + d1) % spec.side, (s.n2 + d2) % spec.side)


@lru_cache(maxsize=64)
def neighbor_table(side: int) -> np.ndarray:
    """Flat neighbor indices, shape ``(6, side**2)``: ``table[j, n] = neighbor(n, j)``.

    The returned array is read-only and shared between callers.
    """
    n1, n2 = np.divmod(np.arange(side * side, dtype=np.intp), side)
    table = np.stack(
        [((n1 + d1) % side) * side + (n2 + d2) % side for d1, d2 in DISPLACEMENTS]
    )
    table.setflags(write=False)
    return table


def enumerate_wavevectors(spec: LatticeSpec) -> list[WaveVector]:
    """All ``N`` wavevectors, ``(0, 0)`` first, in ``k1``-major order."""
    return [
        WaveVector.from_ints(spec, k1, k2)
        for k1 in range(spec.side)
        for k2 in range(spec.side)
    ]
