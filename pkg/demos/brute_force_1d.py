"""Exhaustive search over 1D cell sets: the best configuration is the equal-gap stripe.

Run: python3 demos/brute_force_1d.py
"""
from nonlocal_stripes import brute_force_min_1d, make_params, optimal_width

p = make_params(1, 0.0, 0.1)
h, c = optimal_width(p)
for periods in (1, 2):
    L = 2 * h * periods
    res = brute_force_min_1d(p, L, 16 * periods, 2 * periods + 2)
    print(f"L = {L:.4f} ({periods} stripe period(s) of the optimum), grid {16 * periods} cells")
    for m, e, cells in res.trace:
        print(f"  best with {m} boundaries: energy {e:+.6f} at cells {list(cells)}")
    print(f"  winner: boundaries {[round(b, 4) for b in res.best.boundaries]}, optimum C* = {c:+.6f}\n")
