"""
Block decoupling
================

A singular rescaling followed by one symplectic conjugation exposes the
Whitham-Benjamin function in the upper-left entry; a fixed-point iteration
then removes the remaining coupling completely.
"""

import numpy as np

from bfwaves import reduce_operator, run_pipeline
from bfwaves.coeffs import depth_coefficients
from bfwaves.reduction import analytic_quadruple

for h in (1.0, 2.0):
    d = depth_coefficients(h)
    print(f"h={h}: e_WB = {d.e_WB:+.6f}")
    for eps in (0.02, 0.01, 0.005):
        st = run_pipeline(reduce_operator(h, eps, eps).quadruple)
        e2 = (st.step.E[0, 0].real + d.e_22 * eps**3 / 8) / eps**3
        print(f"  eps=mu={eps}: E2_11/(mu eps^2) = {e2:+.6f}, "
              f"off-diagonal {st.pair.off_diagonal_residual:.1e} after {st.pair.iterations} iterations")

# the same pipeline on the closed-form leading-order matrix
st = run_pipeline(analytic_quadruple(2.0, 0.01, 0.01))
print("analytic U block eigenvalues:", np.linalg.eigvals(st.pair.U_block))
