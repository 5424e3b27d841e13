"""Boundary r-terms summed over growing intervals, against the optimal energy density times length.

For stripes at the optimal width the r-sum over an interval tracks C* |I|;
for other sets it stays above that line up to an interval-independent offset.
Run: python3 demos/r_interval_sums.py
"""
import numpy as np

from nonlocal_stripes import PeriodicSet1D, StripeSpec, make_params, make_stripes_1d, optimal_width, r_interval_sum

p = make_params(1, 0.0, 0.2)
h, c = optimal_width(p)
rng = np.random.default_rng(0)
L = 40.0
sets = {
    "optimal stripes": make_stripes_1d(StripeSpec(h, 0.0, int(round(L / (2 * h))))),
    "random set": PeriodicSet1D(L, tuple(np.sort(rng.uniform(0, L, 16))), False),
}
print(f"h* = {h:.4f}, C* = {c:+.5f}")
print("interval length   " + "   ".join(f"{name:>18}" for name in sets) + "      C* |I|")
for length in (5.0, 10.0, 20.0, 40.0, 80.0):
    sums = [r_interval_sum(p, S, 0.0, length) for S in sets.values()]
    print(f"{length:15.1f}   " + "   ".join(f"{v:18.5f}" for v in sums) + f"   {c * length:9.5f}")
