"""Runtime scaling and the constant success probability.

Fits the first-peak time against sqrt(N log2 N) and scans the constant in the
ancilla-angle rule cos(delta) = c / sqrt(log2 N) to see which value lands on a
plateau near 0.773.  Takes a few seconds.
"""
from trisearch import calibrate_c_delta, plateau_study, sweep_scaling

fit = sweep_scaling([10, 14, 20, 28, 40, 56])
print(f"t_max = {fit.slope:.4f} * sqrt(N log2 N) + {fit.intercept:.3f}   R^2 = {fit.r_squared:.5f}")
for n, t in fit.points:
    print(f"  N={n:5d}  t_max={t}")

best, scan = calibrate_c_delta(side=50)
print("\np_max at side 50 by c_delta:", {c: round(p, 4) for c, p in scan.items()}, "-> best", best)

for n, p in plateau_study([46, 60, 80], c_delta=best):
    print(f"  N={n:5d}  p_max={p:.4f}")
