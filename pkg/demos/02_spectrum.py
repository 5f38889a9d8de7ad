"""Fourier-space picture of the walk.

Each wavevector carries a 6x6 block whose spectrum is {1, 1, -1, -1,
exp(+i theta), exp(-i theta)}.  The nontrivial eigenvectors always overlap the
uniform coin state by exactly 1/sqrt(2), which is why the runtime analysis
reduces to a single lattice sum.
"""
import math

import numpy as np

from trisearch import LatticeSpec, WaveVector, eigenmodes, lattice_sum_exact, lattice_sum_quadrature, reduced_operator
from trisearch.spectral import alpha_estimate
from trisearch.search import auto_cos_delta

spec = LatticeSpec(6)
k = WaveVector.from_ints(spec, 3, 0)
op = reduced_operator(k)
print(f"k=(3,0): cos(theta) = {math.cos(op.theta):.6f}")
print("eigenvalues:", np.round(np.sort_complex(np.linalg.eigvals(op.matrix)), 6))

modes = eigenmodes(op, delta=0.4)
print(f"<u_C|nu+> = {modes.overlap_plus:.6f}, a_k = {modes.a_k:.6f}, b_k = {modes.b_k:.6f}")

print("\n side      N   exact sum   sum/(N log2 N)   quadrature/exact   A/sqrt(N log2 N)")
for side in (8, 16, 32, 64):
    s = LatticeSpec(side)
    n = s.n_sites
    exact = lattice_sum_exact(s)
    delta = math.acos(auto_cos_delta(n))
    a = alpha_estimate(s, delta)
    print(
        f"{side:5d} {n:6d} {exact:11.2f} {exact / (n * math.log2(n)):16.4f} "
        f"{lattice_sum_quadrature(s) / exact:18.3f} {a / math.sqrt(n * math.log2(n)):18.4f}"
    )
