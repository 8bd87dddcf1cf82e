"""
Depth coefficients and the critical depth
=========================================

The Whitham-Benjamin function e_WB(h) decides whether a small Stokes wave
over depth h is modulationally unstable. It changes sign at h_WB.
"""

import numpy as np

from bfwaves import critical_depth, depth_coefficients, whitham_benjamin

# coefficients at a shallow and a deep reference depth
for h in (1.0, 2.0):
    d = depth_coefficients(h)
    print(f"h={h}: c_h={d.c_h:.6f} e_12={d.e_12:.6f} e_22={d.e_22:.6f} e_WB={d.e_WB:+.6f}")

# e_WB is negative below the critical depth and positive above it
h = np.linspace(0.5, 3.0, 11)
for hk, ek in zip(h, whitham_benjamin(h)):
    print(f"  e_WB({hk:.2f}) = {ek:+.4f}")

h_wb = critical_depth()
print("critical depth h_WB =", h_wb)

# e_WB splits into two simpler pieces; check the identity
d = depth_coefficients(h_wb + 1)
print("e_11 + tilde_e11 - e_WB =", d.e_11 + d.tilde_e11 - d.e_WB)
