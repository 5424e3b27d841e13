"""Stripe energy as a function of width, and how the optimal width moves with tau.

Run: python3 demos/stripe_width.py
"""
import numpy as np

from nonlocal_stripes import BracketingError, constants, make_params, optimal_width, stripe_energy

# energy per unit length of equal stripes, d=1, alpha=0
for tau in (0.0, 0.3, 0.6):
    p = make_params(1, 0.0, tau)
    hs = np.geomspace(0.5, 10, 8)
    row = "  ".join(f"{stripe_energy(p, h):+.4f}" for h in hs)
    print(f"tau={tau:.1f}  e(h) on h={np.round(hs, 2).tolist()}:\n  {row}")

# the minimizing width shrinks as tau grows and disappears at the critical value
p0 = make_params(1, 0.0, 0.0)
print(f"\ncritical tau for alpha=0 is j_c = {constants(p0).j_c}")
for tau in np.linspace(0, 1, 6):
    try:
        h, c = optimal_width(make_params(1, 0.0, float(tau)))
        print(f"tau={tau:.1f}  h*={h:.6f}  C*={c:+.6f}")
    except BracketingError:
        print(f"tau={tau:.1f}  no interior minimum: the energy decreases all the way to h -> 0")

# heavier tails (larger alpha) push the optimum out quickly
for alpha in (0.0, 0.2, 0.4, 0.6):
    h, c = optimal_width(make_params(1, alpha, 0.0))
    print(f"alpha={alpha:.1f}  h*={h:.4g}  C*={c:+.4g}")
