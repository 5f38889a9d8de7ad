"""Dense reference operators for small lattices.

Everything here is built from first principles as explicit matrices, factor by
factor, so the sparse maps in :mod:`trisearch.walk` can be certified against
them.  Basis ordering matches :meth:`WalkState.to_vector`: index
``ancilla * 6N + j * N + site`` (``j * N + site`` without the ancilla).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice import LatticeSpec, SiteIndex
from .walk import TulsiParams

__all__ = [
    "MAX_ORACLE_SIDE",
    "DenseUnitary",
    "TooLarge",
    "build_marked",
    "build_standard",
    "build_tulsi",
    "controlled",
    "effective_target",
    "reference_search_curve",
    "shift_matrix",
    "target_reflection",
    "tulsi_factors",
]

MAX_ORACLE_SIDE = 8

# S|j; n1, n2> = |j_out; n1 + dn1, n2 + dn2>, one row per coin state j.
_SHIFT_RULES = (
    (3, 1, 0),
    (4, 1, -1),
    (5, 0, -1),
    (0, -1, 0),
    (1, -1, 1),
    (2, 0, 1),
)


class TooLarge(ValueError):
    """Requested lattice exceeds the dense-oracle memory guard."""


@dataclass
class DenseUnitary:
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def unitarity_residual(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(self.dim))))

    def __matmul__(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec


def _guard(spec: LatticeSpec) -> None:
    if spec.side > MAX_ORACLE_SIDE:
        raise TooLarge(f"oracle limited to side ≤ {MAX_ORACLE_SIDE} (got side={spec.side})")


def _grover(d: int = 6) -> np.ndarray:
    g = np.full((d, d), 1.0 / 3.0)
    np.fill_diagonal(g, -2.0 / 3.0)
    return g


def _position_projector(spec: LatticeSpec, site: SiteIndex) -> np.ndarray:
    p = np.zeros((spec.n_sites, spec.n_sites))
    p[site.flat, site.flat] = 1.0
    return p


def shift_matrix(spec: LatticeSpec) -> np.ndarray:
    """The ``6N x 6N`` permutation matrix of the flip-flop shift."""
    side, n = spec.side, spec.n_sites
    s = np.zeros((6 * n, 6 * n))
    for j, (j_out, d1, d2) in enumerate(_SHIFT_RULES):
        for n1 in range(side):
            for n2 in range(side):
                src = j * n + n1 * side + n2
                dst = j_out * n + ((n1 + d1) % side) * side + (n2 + d2) % side
                s[dst, src] = 1.0
    return s


def build_standard(spec: LatticeSpec) -> DenseUnitary:
    """``U = S (G (x) I_P)``."""
    _guard(spec)
    coin = np.kron(_grover(), np.eye(spec.n_sites))
    return DenseUnitary((shift_matrix(spec) @ coin).astype(np.complex128))


def build_marked(spec: LatticeSpec, target: SiteIndex) -> DenseUnitary:
    """``U' = S C'`` with ``C' = -I_C (x) |t><t| + G (x) (I_P - |t><t|)``."""
    _guard(spec)
    proj = _position_projector(spec, target)
    coin = -np.kron(np.eye(6), proj) + np.kron(_grover(), np.eye(spec.n_sites) - proj)
    return DenseUnitary((shift_matrix(spec) @ coin).astype(np.complex128))


def target_reflection(spec: LatticeSpec, target: SiteIndex) -> np.ndarray:
    """``R_t = I_6N - 2 |u_C, t><u_C, t|``."""
    vec = np.zeros(6 * spec.n_sites)
    vec[np.arange(6) * spec.n_sites + target.flat] = 1.0 / math.sqrt(6.0)
    return np.eye(6 * spec.n_sites) - 2.0 * np.outer(vec, vec)


def controlled(payload: np.ndarray) -> np.ndarray:
    """Identity on the ancilla-0 block, ``payload`` on the ancilla-1 block."""
    dim = payload.shape[0]
    out = np.zeros((2 * dim, 2 * dim), dtype=np.result_type(payload, np.float64))
    out[:dim, :dim] = np.eye(dim)
    out[dim:, dim:] = payload
    return out


def tulsi_factors(spec: LatticeSpec, params: TulsiParams) -> dict[str, np.ndarray]:
    """The five factors of the Tulsi operator, each as a ``12N x 12N`` matrix."""
    _guard(spec)
    eye = np.eye(6 * spec.n_sites)
    c, s = params.cos_delta, params.sin_delta
    x_delta = np.array([[c, s], [-s, c]])
    minus_z = np.array([[-1.0, 0.0], [0.0, 1.0]])
    return {
        "minus_z": np.kron(minus_z, eye),
        "controlled_u": controlled(build_standard(spec).matrix),
        "x_delta_dagger": np.kron(x_delta.T, eye),
        "controlled_reflection": controlled(target_reflection(spec, params.target)),
        "x_delta": np.kron(x_delta, eye),
    }


def build_tulsi(spec: LatticeSpec, params: TulsiParams) -> DenseUnitary:
    """``(-Z (x) I) C(U) (X_d^dag (x) I) C(R_t) (X_d (x) I)``, multiplied factor by factor."""
    f = tulsi_factors(spec, params)
    m = f["minus_z"] @ f["controlled_u"] @ f["x_delta_dagger"] @ f["controlled_reflection"] @ f["x_delta"]
    return DenseUnitary(m.astype(np.complex128))


def effective_target(spec: LatticeSpec, params: TulsiParams) -> np.ndarray:
    """Dense ``|delta_1, u_C, t>`` in the ``12N`` basis."""
    n6 = 6 * spec.n_sites
    vec = np.zeros(2 * n6)
    idx = np.arange(6) * spec.n_sites + params.target.flat
    vec[idx] = -params.sin_delta / math.sqrt(6.0)
    vec[n6 + idx] = params.cos_delta / math.sqrt(6.0)
    return vec


def reference_search_curve(spec: LatticeSpec, params: TulsiParams, steps: int) -> np.ndarray:
    """``|<t_bar| (U'')^t |psi_0>|^2`` for ``t = 0..steps`` by dense matvecs."""
    op = build_tulsi(spec, params).matrix
    n6 = 6 * spec.n_sites
    psi = np.zeros(2 * n6, dtype=np.complex128)
    psi[n6:] = 1.0 / math.sqrt(n6)
    target = effective_target(spec, params)
    probs = [abs(target @ psi) ** 2]
    for _ in range(steps):
        psi = op @ psi
        probs.append(abs(target @ psi) ** 2)
    return np.array(probs)
