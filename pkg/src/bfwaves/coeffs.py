"""Closed-form depth coefficients and the critical depth.

Everything is a function of the depth h alone (gravity g = 1, wavenumber 1)
and is built from the linear phase speed c_h = sqrt(tanh h).
"""

from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np
from scipy.optimize import brentq

H_MIN = 0.05
H_MAX = 50.0


class DomainError(ValueError):
    """Raised when a depth lies outside the admissible range."""


class RegimeError(ValueError):
    """Raised when a quantity is requested outside its regime of validity."""


def check_depth(h):
    h = float(h)
    if not (H_MIN < h < H_MAX) or not np.isfinite(h):
        raise DomainError(f"depth h={h!r} outside admissible range ({H_MIN}, {H_MAX})")
    return h


@dataclass(frozen=True)
class DepthCoefficients:
    h: float
    c_h: float
    gamma_h: float
    alpha_h: float
    beta_h: float
    delta_h: float
    zeta_h: float
    b_bold_h: float
    e_11: float
    e_12: float
    e_22: float
    e_WB: float
    f_11: float
    tilde_e11: float
    D_h: float
    breve_c_h: float
    e_h: Optional[float]

    def as_dict(self):
        return asdict(self)


def whitham_benjamin(h):
    """e_WB(h) from its direct closed form (vectorized over h)."""
    h = np.asarray(h, dtype=float)
    c = np.sqrt(np.tanh(h))
    c4 = c**4
    e12 = c + (1 - c4) * h / c
    D = h - 0.25 * e12**2
    first = (9 * c**8 - 10 * c4 + 9) / (8 * c**6)
    second = (1 + 0.5 * (1 - c4) + 0.75 * (1 - c4) ** 2 * h / c**2) / D
    return (first - second) / c


def depth_coefficients(h):
    """Evaluate every depth-dependent constant at depth h."""
    h = check_depth(h)
    c = np.sqrt(np.tanh(h))
    c2, c4 = c * c, c**4

    gamma = 1 + h * (1 - c4) / c2
    alpha = 0.5 * c**-5.5 * (3 + c4)
    beta = 0.25 * c**-6.5 * (1 + c4) * (3 - c4)
    delta = (3 + c4) / (4 * c**2.5)
    zeta = c * gamma**2 / 8
    b_bold = gamma * c + h * (1 - c4) / c * (gamma - 2 * (1 - c2 * h))

    e12 = c + (1 - c4) * h / c
    e22 = ((1 - c4) * (1 + 3 * c4) * h * h + 2 * c2 * (c4 - 1) * h + c4) / c**3
    e11 = (9 * c**8 - 10 * c4 + 9) / (8 * c**7)
    f11 = 0.5 * c**-1.5 * (1 - c4)
    D = h - 0.25 * e12**2
    tilde_e11 = -(1 / c + h * f11**2 + e12 * f11 / np.sqrt(c)) / D
    eWB = float(whitham_benjamin(h))
    e_h = float(np.sqrt(8 * eWB / e22)) if eWB > 0 else None

    return DepthCoefficients(
        h=h, c_h=float(c), gamma_h=float(gamma), alpha_h=float(alpha),
        beta_h=float(beta), delta_h=float(delta), zeta_h=float(zeta),
        b_bold_h=float(b_bold), e_11=float(e11), e_12=float(e12),
        e_22=float(e22), e_WB=eWB, f_11=float(f11),
        tilde_e11=float(tilde_e11), D_h=float(D), breve_c_h=float(2 * c - e12),
        e_h=e_h,
    )


def critical_depth(bracket=(1.0, 2.0), tol=1e-12):
    """Depth where e_WB changes sign, found by Brent's bracketing method."""
    a, b = (check_depth(x) for x in bracket)
    fa, fb = whitham_benjamin(a), whitham_benjamin(b)
    if np.sign(fa) == np.sign(fb):
        raise RegimeError(f"e_WB has no sign change on [{a}, {b}]")
    return float(brentq(whitham_benjamin, a, b, xtol=tol, rtol=4 * np.finfo(float).eps))
