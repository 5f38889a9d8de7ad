"""Walk basics on a small triangular torus.

Builds the lattice, starts the unmarked walk from a single site and shows
that the uniform superposition is stationary, then checks a single step
against the dense reference operator.
"""
import numpy as np

from trisearch import LatticeSpec, WalkState, apply_step_standard, neighbor, uniform_initial_state
from trisearch.oracle import build_standard

spec = LatticeSpec(6)
origin = spec.site(0, 0)
print("neighbors of (0,0):", [(s.n1, s.n2) for s in (neighbor(spec, origin, j) for j in range(6))])

# One walker sitting at (0,0) pointing along direction 0
state = WalkState.zeros(spec, has_ancilla=False)
state.amps[1, 0, origin.flat] = 1.0
after = apply_step_standard(state)
for j, flat in zip(*np.nonzero(after.b)):
    site = spec.site_from_flat(int(flat))
    print(f"  |j={j}, ({site.n1},{site.n2})>  amplitude {after.b[j, flat].real:+.4f}")

s0 = uniform_initial_state(spec)
print("uniform state unchanged by one step:", np.allclose(apply_step_standard(s0).amps, s0.amps))

dense = build_standard(spec)
print("sparse vs dense max error:", np.max(np.abs(after.to_vector() - dense @ state.to_vector())))

# Spread of the walker after a few steps
for _ in range(9):
    after = apply_step_standard(after)
density = np.sum(np.abs(after.b) ** 2, axis=0).reshape(spec.side, spec.side)
print("position density after 10 steps:\n", np.round(density, 3))
