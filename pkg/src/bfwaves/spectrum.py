"""Benjamin-Feir predictions and their reconciliation with the direct Floquet spectrum."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment, minimize_scalar

from .coeffs import RegimeError, depth_coefficients
from .operator import assemble_L, full_spectrum
from .stokes import DEFAULT_M, coefficient_functions


class ClusterAmbiguityError(RuntimeError):
    """Raised when the near-zero quadruple is not separated from the rest of the spectrum."""


def _omega(h, k):
    k = np.abs(k)
    return np.sqrt(k * np.tanh(h * k))


def delta_bf(h, mu, eps):
    """Leading part 8 e_WB eps^2 - e_22 mu^2 of the instability discriminant."""
    d = depth_coefficients(h)
    return 8 * d.e_WB * eps**2 - d.e_22 * mu**2


@dataclass
class BenjaminFeirPrediction:
    h: float
    mu: float
    eps: float
    delta_BF_leading: float
    mu_bar_leading: Optional[float]
    lambda1_plus: complex
    lambda1_minus: complex
    lambda0_plus: complex
    lambda0_minus: complex
    unstable: bool
    leading_order: bool = True

    def quadruple(self):
        return np.array([self.lambda1_plus, self.lambda1_minus, self.lambda0_plus, self.lambda0_minus])


def predict_eigenvalues(h, mu, eps):
    """Near-zero eigenvalues to leading order in eps.

    The eps-independent part is taken from the exact flat-state dispersion
    relation, so the prediction is exact at eps = 0; it agrees with
    i breve_c mu / 2 +- (mu/8) sqrt(e_22) sqrt(Delta_BF) up to O(mu^3).
    """
    d = depth_coefficients(h)
    c = d.c_h
    # flat pair: center and half splitting of lambda_1^{+-}(mu)
    center = 1j * (c * mu + 0.5 * (_omega(h, 1 - mu) - _omega(h, 1 + mu)))
    q = c - 0.5 * (_omega(h, 1 + mu) + _omega(h, 1 - mu))
    rad = d.e_22 * d.e_WB * mu**2 * eps**2 / 8 - q * q
    root = np.sqrt(rad + 0j)
    lam0 = np.sqrt(mu * np.tanh(h * mu))
    mu_bar = d.e_h * eps if d.e_h is not None else None
    return BenjaminFeirPrediction(
        h=float(h), mu=float(mu), eps=float(eps),
        delta_BF_leading=float(8 * d.e_WB * eps**2 - d.e_22 * mu**2),
        mu_bar_leading=mu_bar,
        lambda1_plus=complex(center + root), lambda1_minus=complex(center - root),
        lambda0_plus=complex(1j * (c * mu - lam0)), lambda0_minus=complex(1j * (c * mu + lam0)),
        unstable=bool(rad > 0),
    )


def figure8(h, eps, samples=200):
    """Leading-order figure-eight locus: rows (mu, Re+, Im+, Re-, Im-) for mu in [-mu_bar, mu_bar].

    Negative mu rows carry the complex-conjugate (lower) loop.
    """
    d = depth_coefficients(h)
    if d.e_h is None:
        raise RegimeError(f"e_WB({h}) <= 0: no unstable band")
    mu_bar = d.e_h * eps
    mu = np.linspace(0.0, mu_bar, samples)
    re = mu / 8 * np.sqrt(d.e_22) * np.sqrt(np.maximum(8 * d.e_WB * eps**2 - d.e_22 * mu**2, 0.0))
    im = 0.5 * d.breve_c_h * mu
    upper = np.column_stack([mu, re, im, -re, im])
    lower = np.column_stack([-mu[::-1], re[::-1], -im[::-1], -re[::-1], -im[::-1]])
    return np.vstack([lower[:-1], upper])


def max_growth(h, eps):
    """Leading-order maximal real part 1/2 e_WB eps^2 and its location mu_bar / sqrt(2)."""
    d = depth_coefficients(h)
    if d.e_h is None:
        raise RegimeError(f"e_WB({h}) <= 0: no instability")
    return 0.5 * d.e_WB * eps**2, d.e_h * eps / np.sqrt(2)


@dataclass
class SpectrumReport:
    full: np.ndarray = field(repr=False)
    quadruple: np.ndarray
    prediction: BenjaminFeirPrediction
    paired: np.ndarray
    abs_discrepancy: np.ndarray
    rel_discrepancy: np.ndarray

    def unstable_pairs(self, threshold=1e-8):
        return self.quadruple[np.abs(self.quadruple.real) > threshold]


def near_zero(full, count=4, ratio=2.0):
    full = np.asarray(full)
    order = np.argsort(np.abs(full))
    mods = np.abs(full[order])
    if len(full) > count and mods[count] < ratio * mods[count - 1]:
        raise ClusterAmbiguityError(
            f"cluster not separated: |lambda_5| = {mods[count]:.3e}, |lambda_4| = {mods[count - 1]:.3e}")
    return full[order[:count]]


def match_spectrum(full, prediction):
    """Select the four smallest-modulus eigenvalues and pair them with the prediction."""
    quad = near_zero(full)
    pred = prediction.quadruple()
    cost = np.abs(pred[:, None] - quad[None, :])
    rows, cols = linear_sum_assignment(cost)
    paired = quad[cols[np.argsort(rows)]]
    err = np.abs(paired - pred)
    rel = err / np.maximum(np.abs(pred), np.finfo(float).tiny)
    return SpectrumReport(np.asarray(full), quad, prediction, paired, err, rel)


def direct_quadruple(h, eps, mu, M=DEFAULT_M, coeffs=None):
    if coeffs is None:
        coeffs = coefficient_functions(h, eps, M)
    return near_zero(full_spectrum(assemble_L(h, eps, mu, M, coeffs)))


def numeric_growth(h, eps, mu, M=DEFAULT_M, coeffs=None):
    return float(np.max(direct_quadruple(h, eps, mu, M, coeffs).real))


def numeric_max_growth(h, eps, M=DEFAULT_M, xtol=None):
    """Maximum over mu of the largest real part in the direct near-zero quadruple."""
    d = depth_coefficients(h)
    if d.e_h is None:
        raise RegimeError(f"e_WB({h}) <= 0: no instability")
    coeffs = coefficient_functions(h, eps, M)
    mu_bar = d.e_h * eps
    res = minimize_scalar(lambda m: -numeric_growth(h, eps, m, M, coeffs),
                          bounds=(0.05 * mu_bar, 1.2 * mu_bar), method="bounded",
                          options=dict(xatol=xtol or 1e-4 * mu_bar))
    return -res.fun, res.x


def unstable_band(h, eps, method="analytic", M=DEFAULT_M, tol=None, threshold=1e-9):
    """Band edge mu_bar(eps): leading-order e_h eps, or the numeric Re-collision point.

    The numeric edge is bisected on the indicator max Re > threshold; the
    default tolerance is 1e-6 relative to the leading-order edge.
    """
    d = depth_coefficients(h)
    if d.e_h is None:
        raise RegimeError(f"e_WB({h}) <= 0: no unstable band")
    mu_bar = d.e_h * eps
    if method == "analytic" or eps == 0:
        return mu_bar
    if method != "numeric":
        raise ValueError(f"unknown method {method!r}")
    if tol is None:
        tol = 1e-6 * mu_bar
    coeffs = coefficient_functions(h, eps, M)
    unstable = lambda m: numeric_growth(h, eps, m, M, coeffs) > threshold
    lo, hi = 0.5 * mu_bar, 1.5 * mu_bar
    while not unstable(lo):
        lo *= 0.5
    while unstable(hi):
        hi *= 1.5
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if unstable(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
