"""Success probability against time for N = 400.

Compares the marked-coin walk with the ancilla (Tulsi) version.  The marked
walk curve zigzags between even and odd steps and peaks early and low; the
ancilla version is smooth, peaks later and much higher.
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from trisearch import LatticeSpec, SearchConfig, run_search

spec = LatticeSpec(20)
marked = run_search(SearchConfig(spec, variant="marked", max_steps=200, stop_at_peak=False))
tulsi = run_search(SearchConfig(spec, variant="tulsi", max_steps=200, stop_at_peak=False))

print(f"marked: first peak t={marked.t_max}, p={marked.p_max:.4f}")
print(f"tulsi : first peak t={tulsi.t_max}, p={tulsi.p_max:.4f}")

fig, ax = plt.subplots(figsize=(6, 4))
ax.plot(marked.probs, lw=2, label="marked coin (position probability)")
ax.plot(marked.coin_uniform, lw=1, ls=":", label="marked coin (overlap with |u_C, t>)")
ax.plot(tulsi.probs, lw=1, label="with ancilla")
ax.set_xlabel("steps")
ax.set_ylabel("success probability")
ax.legend()
fig.tight_layout()
fig.savefig("search_curves.png", dpi=120)
print("wrote search_curves.png")
