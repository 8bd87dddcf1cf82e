"""
Figure-eight, unstable band and maximal growth
==============================================

Inside |mu| < mu_bar(eps) the pair lambda_1^{+-} leaves the imaginary axis
and traces a figure-eight. The band edge and the largest real part are
compared with direct eigenvalue computations.
"""

from bfwaves import figure8, unstable_band
from bfwaves.spectrum import max_growth, numeric_max_growth

h = 2.0
rows = figure8(h, 0.01, 11)
for mu, re, im, _, _ in rows[::4]:
    print(f"  mu={mu:+.5f}  lambda_1+ = {re:.3e} {im:+.3e}i")

for eps in (0.02, 0.01, 0.005):
    a, n = unstable_band(h, eps), unstable_band(h, eps, "numeric")
    g, _ = max_growth(h, eps)
    gn, _ = numeric_max_growth(h, eps)
    print(f"eps={eps}: mu_bar {a:.6f} (numeric {n:.6f}), max Re {g:.4e} (numeric {gn:.4e})")
