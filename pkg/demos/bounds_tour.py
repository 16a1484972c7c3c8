"""Where the closed-form bounds start to bite.

The construction parameter delta(n) = 4 (log log n)^{3/2} / (log n)^{1/2}
must fall below 1/4 before the densification step applies, which happens
only around log n = 6e5.
"""

import math

from rtworkbench.bounds import assemble_above_window, assemble_critical_point, be_window_params, critical_log_n, window_summary

r = window_summary(10**6, m=10**4, alpha=10**3)
for e in r.entries:
    print(f"{e.name:42s} {e.value:.6g}   [{e.formula}]")

for n in (10**8, 10**12):
    w = be_window_params(n)
    print(f"n={n:.0e}: h={w.inputs['h']}, eps={w['epsilon']:.3f}, delta={w['delta']:.3f}, flags={w.flags}")
    print("   critical point:", assemble_critical_point(n).flags["densify_hypothesis"])

L = critical_log_n()
print(f"delta(n) = 1/4 at log n = {L:.1f} (n ~ 10^{L / math.log(10):.0f})")
n = 10 ** 270000
r = assemble_critical_point(n)
print("n = 10^270000:", r.flags["densify_hypothesis"], "independence bound / n =",
      f"{3 * r['delta']:.4f}")
r = assemble_above_window(n, n // 3)
print("  above window at m = n/3:", r.flags["layer_hypothesis"], "excess over m n =", f"{r['excess_over_mn']:.4f}")
