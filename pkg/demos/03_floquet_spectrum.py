"""
Bloch-Floquet spectrum
======================

The linearized operator at Floquet exponent mu is truncated to Fourier modes
|k| <= M. At eps = 0 its spectrum is known exactly; for eps > 0 four
eigenvalues stay near zero and carry the instability.
"""

import numpy as np

from bfwaves import assemble_L, coefficient_functions, full_spectrum, match_spectrum, predict_eigenvalues
from bfwaves.operator import flat_eigenvalues
from bfwaves.validation import multiset_distance

h, mu, M = 2.0, 0.1, 32

# flat state: compare with the dispersion relation
ev = full_spectrum(assemble_L(h, 0.0, mu, M))
print("flat spectrum gap:", multiset_distance(ev, flat_eigenvalues(h, mu, M)))

# Stokes wave inside the unstable band
eps, mu = 0.01, 0.01
cf = coefficient_functions(h, eps, M)
ev = full_spectrum(assemble_L(h, eps, mu, M, cf))
rep = match_spectrum(ev, predict_eigenvalues(h, mu, eps))
for z, p in zip(rep.paired, rep.prediction.quadruple()):
    print(f"  direct {z:.8f}   predicted {p:.8f}")

# the spectrum is symmetric under lambda -> -conj(lambda)
print("mirror defect:", multiset_distance(ev, -np.conj(ev)))
