"""Benjamin-Feir instability of small-amplitude Stokes waves over finite depth."""

__version__ = "0.1.0"

from .coeffs import DepthCoefficients, critical_depth, depth_coefficients, whitham_benjamin
from .stokes import (
    FourierField, coefficient_functions, conformal_fixed_point, dirichlet_neumann,
    stokes_expansion, traveling_residual,
)
from .operator import assemble_B, assemble_L, full_spectrum
from .kato import reduce_operator, reduced_matrix, spectral_projector, transformation_operator
from .reduction import (
    decouple_step, full_decouple, run_pipeline, singular_rescaling, solve_homological,
    sylvester_det, sylvester_inverse,
)
from .spectrum import delta_bf, figure8, match_spectrum, predict_eigenvalues, unstable_band
