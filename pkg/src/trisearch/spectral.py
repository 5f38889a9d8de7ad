"""Fourier-space analysis of the unmarked walk.

In the plane-wave basis the walk is block diagonal: each wavevector ``k``
carries a 6x6 reduced operator ``U_k`` with eigenvalues ``{1, 1, -1, -1,
exp(+i theta_k), exp(-i theta_k)}`` where
``cos theta_k = (cos k1 + cos k2 + cos(k1 - k2)) / 3`` in reduced angles.
This module builds ``U_k``, diagonalizes it, phase-fixes the nontrivial
eigenvectors and evaluates the lattice sums behind the runtime estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import N_DIRECTIONS, LatticeSpec, WaveVector, enumerate_wavevectors
from .walk import WalkState

__all__ = [
    "DegenerateMode",
    "ModeDecomposition",
    "ReducedOperator",
    "alpha_estimate",
    "cluster_eigenvalues",
    "cos_theta_grid",
    "dispersion",
    "eigenmodes",
    "expected_spectrum",
    "lattice_sum_exact",
    "lattice_sum_quadrature",
    "plane_wave_state",
    "reduced_operator",
    "spectrum_matches",
    "spectrum_summary",
    "spectrum_table",
]

UNIFORM_COIN = np.full(N_DIRECTIONS, 1.0 / math.sqrt(N_DIRECTIONS))

# Eigenvalue clustering tolerance for multiplicity grouping.
CLUSTER_TOL = 1e-8

# Row r of U_k is exp(i * phase_r) * (row `col_r` of the Grover coin); phase_r is
# (c1 * k1 + c2 * k2) in reduced angles.
_ROW_PHASES = ((-1, 0), (-1, 1), (0, 1), (1, 0), (1, -1), (0, -1))
_ROW_GROVER = (3, 4, 5, 0, 1, 2)


class DegenerateMode(ValueError):
    """Raised when eigen-decomposition is requested at ``theta_k = 0``."""


@dataclass(frozen=True)
class ReducedOperator:
    k: WaveVector
    matrix: np.ndarray
    theta: float


@dataclass(frozen=True)
class ModeDecomposition:
    """Phase-fixed eigenvectors of ``U_k`` and the target-decomposition coefficients.

    ``nu_plus``/``nu_minus`` belong to ``exp(+/- i theta_k)`` and are rescaled so
    that ``<u_C|nu>`` is real and positive.  ``nu_trivial`` holds the four
    eigenvectors for ``+1``/``-1`` as columns, unmodified.
    """

    k: WaveVector
    nu_plus: np.ndarray
    nu_minus: np.ndarray
    nu_trivial: np.ndarray
    trivial_eigenvalues: np.ndarray
    a_k: float
    b_k: float
    a0: float

    @property
    def overlap_plus(self) -> complex:
        return complex(np.vdot(UNIFORM_COIN, self.nu_plus))

    @property
    def overlap_minus(self) -> complex:
        return complex(np.vdot(UNIFORM_COIN, self.nu_minus))

    @property
    def overlap_trivial(self) -> np.ndarray:
        return UNIFORM_COIN @ self.nu_trivial


def cos_theta_grid(spec: LatticeSpec) -> np.ndarray:
    """``cos theta_k`` on the full ``side x side`` wavevector grid, indexed ``[k1, k2]``."""
    kt = 2.0 * np.pi * np.arange(spec.side) / spec.side
    k1, k2 = np.meshgrid(kt, kt, indexing="ij")
    return (np.cos(k1) + np.cos(k2) + np.cos(k1 - k2)) / 3.0


def _cos_theta(k: WaveVector) -> float:
    return (math.cos(k.ktilde1) + math.cos(k.ktilde2) + math.cos(k.ktilde1 - k.ktilde2)) / 3.0


def dispersion(k: WaveVector) -> float:
    """Nontrivial eigenphase ``theta_k`` in ``[0, pi]``."""
    return math.acos(min(1.0, max(-1.0, _cos_theta(k))))


def reduced_operator(k: WaveVector) -> ReducedOperator:
    """The 6x6 block ``U_k = S_k G`` of the walk at wavevector ``k``."""
    grover = np.full((N_DIRECTIONS, N_DIRECTIONS), 1.0 / 3.0)
    np.fill_diagonal(grover, -2.0 / 3.0)
    mat = np.empty((N_DIRECTIONS, N_DIRECTIONS), dtype=np.complex128)
    for r, ((c1, c2), g) in enumerate(zip(_ROW_PHASES, _ROW_GROVER)):
        mat[r] = np.exp(1j * (c1 * k.ktilde1 + c2 * k.ktilde2)) * grover[g]
    return ReducedOperator(k, mat, dispersion(k))


def expected_spectrum(theta: float) -> np.ndarray:
    return np.array([1, 1, -1, -1, np.exp(1j * theta), np.exp(-1j * theta)])


def cluster_eigenvalues(values: np.ndarray, tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Group eigenvalues closer than ``tol`` (single linkage); return ``(mean, multiplicity)``."""
    remaining = list(np.asarray(values, dtype=np.complex128))
    clusters: list[list[complex]] = []
    while remaining:
        group = [remaining.pop(0)]
        grew = True
        while grew:
            grew = False
            for v in list(remaining):
                if min(abs(v - g) for g in group) < tol:
                    group.append(v)
                    remaining.remove(v)
                    grew = True
        clusters.append(group)
    return [(complex(np.mean(g)), len(g)) for g in clusters]


def spectrum_matches(values: np.ndarray, expected: np.ndarray, tol: float = CLUSTER_TOL) -> bool:
    """True when both multisets cluster into the same centers with the same multiplicities."""
    got = cluster_eigenvalues(values, tol)
    want = cluster_eigenvalues(expected, tol)
    if len(got) != len(want):
        return False
    unused = list(want)
    for center, mult in got:
        hit = next((w for w in unused if abs(w[0] - center) < tol and w[1] == mult), None)
        if hit is None:
            return False
        unused.remove(hit)
    return True


def _phase_fix(vec: np.ndarray) -> np.ndarray:
    overlap = np.vdot(UNIFORM_COIN, vec)
    return vec * (np.conj(overlap) / abs(overlap))


def eigenmodes(op: ReducedOperator, delta: float = 0.0) -> ModeDecomposition:
    """Diagonalize ``U_k`` and decompose the effective target on it.

    Raises
    ------
    DegenerateMode
        If ``theta_k`` vanishes, which only happens at ``k = 0``.
    """
    if abs(op.theta) < 1e-9:
        raise DegenerateMode(f"theta_k = {op.theta:g} at k=({op.k.k1}, {op.k.k2}); k = 0 has no propagating mode")
    vals, vecs = np.linalg.eig(op.matrix)
    i_plus = int(np.argmin(np.abs(vals - np.exp(1j * op.theta))))
    i_minus = int(np.argmin(np.abs(vals - np.exp(-1j * op.theta))))
    if i_plus == i_minus:
        raise DegenerateMode(f"e^(+i theta) and e^(-i theta) coincide at k=({op.k.k1}, {op.k.k2})")
    rest = [i for i in range(N_DIRECTIONS) if i not in (i_plus, i_minus)]

    nu_plus = _phase_fix(vecs[:, i_plus] / np.linalg.norm(vecs[:, i_plus]))
    nu_minus = _phase_fix(vecs[:, i_minus] / np.linalg.norm(vecs[:, i_minus]))
    overlap = np.vdot(nu_plus, UNIFORM_COIN).real
    return ModeDecomposition(
        k=op.k,
        nu_plus=nu_plus,
        nu_minus=nu_minus,
        nu_trivial=vecs[:, rest],
        trivial_eigenvalues=vals[rest],
        a_k=math.cos(delta) * overlap,
        b_k=-math.sin(delta) * overlap,
        a0=math.cos(delta),
    )


def plane_wave_state(spec: LatticeSpec, k: WaveVector, coin: np.ndarray) -> WalkState:
    """``|coin> (x) |k>`` on the ancilla-1 slice, ``<n|k> = exp(-i k.r) / sqrt(N)``."""
    n1, n2 = np.divmod(np.arange(spec.n_sites), spec.side)
    wave = np.exp(-1j * (k.ktilde1 * n1 + k.ktilde2 * n2)) / math.sqrt(spec.n_sites)
    state = WalkState.zeros(spec, has_ancilla=False)
    state.amps[1] = np.outer(np.asarray(coin, dtype=np.complex128), wave)
    return state


def lattice_sum_exact(spec: LatticeSpec) -> float:
    """``(1/2) sum_{k != 0} 1 / (1 - cos theta_k)`` over the discrete zone."""
    c = cos_theta_grid(spec).ravel()[1:]  # drop k = (0, 0)
    return 0.5 * float(np.sum(1.0 / (1.0 - c)))


def lattice_sum_quadrature(spec: LatticeSpec, points: int | None = None) -> float:
    """Continuum estimate of :func:`lattice_sum_exact`.

    Midpoint rule on the box ``[eps, 2 pi - eps]^2`` with ``eps = 2 pi sqrt(2/N)``,
    which cuts out every periodic image of the ``k = 0`` singularity.  The sum is
    replaced by the integral times the point density ``N / (2 pi - 2 eps)^2``.
    """
    n = spec.n_sites
    eps = 2.0 * math.pi * math.sqrt(2.0 / n)
    if points is None:
        points = max(400, 8 * spec.side)
    h = (2.0 * math.pi - 2.0 * eps) / points
    x = eps + h * (np.arange(points) + 0.5)
    k1, k2 = np.meshgrid(x, x, indexing="ij")
    integrand = 1.0 / (1.0 - (np.cos(k1) + np.cos(k2) + np.cos(k1 - k2)) / 3.0)
    integral = float(np.sum(integrand)) * h * h
    return 0.5 * n / (2.0 * math.pi - 2.0 * eps) ** 2 * integral


def alpha_estimate(spec: LatticeSpec, delta: float) -> float:
    """Raw runtime proxy ``(1/a0) sqrt(sum a_k^2/(1 - cos theta_k) + sum b_k^2/4)``.

    Uses ``a0 = cos d``, ``a_k = cos d / sqrt 2`` and ``b_k = -sin d / sqrt 2``.
    Only meaningful up to a constant factor.
    """
    cos_d, sin_d = math.cos(delta), math.sin(delta)
    if cos_d <= 0.0:
        return math.inf
    a_term = cos_d**2 * lattice_sum_exact(spec)  # a_k^2 = cos^2 d / 2 absorbs the 1/2
    b_term = (spec.n_sites - 1) * (sin_d**2 / 2.0) / 4.0
    return math.sqrt(a_term + b_term) / cos_d


def spectrum_table(spec: LatticeSpec) -> list[dict[str, float]]:
    """One row per wavevector, ``(0, 0)`` first."""
    rows = []
    for k in enumerate_wavevectors(spec):
        c = _cos_theta(k)
        rows.append(
            {
                "k1": k.k1,
                "k2": k.k2,
                "ktilde1": k.ktilde1,
                "ktilde2": k.ktilde2,
                "cos_theta": c,
                "theta": dispersion(k),
                "one_minus_cos_inv": math.inf if k.is_zero else 1.0 / (1.0 - c),
            }
        )
    return rows


def spectrum_summary(spec: LatticeSpec, delta: float) -> dict[str, float]:
    exact = lattice_sum_exact(spec)
    quad = lattice_sum_quadrature(spec)
    a = alpha_estimate(spec, delta)
    n = spec.n_sites
    return {
        "side": spec.side,
        "n_sites": n,
        "delta": delta,
        "cos_delta": math.cos(delta),
        "exact_half_sum": exact,
        "quadrature_estimate": quad,
        "quadrature_to_exact": quad / exact,
        "exact_over_NlogN": exact / (n * math.log2(n)),
        "alpha_estimate": a,
        "alpha_over_sqrt_NlogN": a / math.sqrt(n * math.log2(n)),
        "log_base": 2,
    }
