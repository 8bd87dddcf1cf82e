"""Truncated Fourier matrices of the Bloch-Floquet operator L_{mu,eps} = J B_{mu,eps}.

Vectors have 2(2M+1) entries: the eta-component modes k = -M..M followed by the
psi-component modes. The scalar product is the plain sum sum_k u_k conj(v_k),
which is the normalized mean of f_1 conj(g_1) + f_2 conj(g_2) over a period.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

from .coeffs import check_depth
from .stokes import CoefficientFunctions, TruncationError


class EigenError(RuntimeError):
    """Raised when the dense eigensolver fails."""


@dataclass
class OperatorMatrix:
    entries: np.ndarray
    M: int
    h: float
    mu: float
    eps: float
    kind: str = "L"

    @property
    def size(self):
        return self.entries.shape[0]


def symplectic_form(M):
    """Matrix of J = [[0, Id], [-Id, 0]]."""
    n = 2 * M + 1
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]]).astype(complex)


def reversibility_signs(M):
    """Sign matrix S with rho(u) = S conj(u) for the involution (eta(-x)^*, -psi(-x)^*)."""
    n = 2 * M + 1
    return np.diag(np.r_[np.ones(n), -np.ones(n)]).astype(complex)


def apply_reversibility(u, M):
    return reversibility_signs(M) @ np.conj(u)


def multiplication_matrix(field):
    """Toeplitz matrix of u -> field * u on modes -M..M."""
    c = field.coeffs
    M = field.M
    pad = np.zeros(M, complex)
    col = np.r_[c[M:], pad]
    row = np.r_[c[M::-1], pad]
    return toeplitz(col, row)


def _blocks(h, mu, M, coeffs, f_eps):
    h = check_depth(h)
    if not 0 <= mu < 0.5:
        raise ValueError(f"mu={mu} outside the zone [0, 1/2)")
    if coeffs is not None and coeffs.p_eps.M != M:
        raise TruncationError(f"coefficients truncated at {coeffs.p_eps.M}, operator at {M}")
    n = 2 * M + 1
    kmu = np.arange(-M, M + 1) + mu
    if coeffs is None:
        P = np.zeros((n, n), complex)
        A = np.zeros((n, n), complex)
    else:
        P = multiplication_matrix(coeffs.p_eps)
        A = multiplication_matrix(coeffs.a_eps)
    with np.errstate(invalid="ignore"):
        symbol = kmu * np.tanh((h + f_eps) * kmu)
    return n, kmu, P, A, np.diag(symbol).astype(complex)


def _resolve(coeffs, f_eps):
    if f_eps is None:
        f_eps = coeffs.f_eps if coeffs is not None else 0.0
    return f_eps


def assemble_B(h, eps, mu, M, coeffs=None, f_eps=None, shifted=False):
    """Self-adjoint factor B with L = J B; shifted=True removes the i c_h mu part of L."""
    f_eps = _resolve(coeffs, f_eps)
    n, kmu, P, A, mult = _blocks(h, mu, M, coeffs, f_eps)
    c = np.sqrt(np.tanh(h))
    I = np.eye(n)
    dx = np.diag(1j * kmu)
    CP = c * I + P
    B = np.block([[I + A, -CP @ dx], [dx @ CP, mult]])
    if shifted:
        B = B + 1j * c * mu * symplectic_form(M)
    return OperatorMatrix(B, M, float(h), float(mu), float(eps), "Bs" if shifted else "B")


def assemble_L(h, eps, mu, M, coeffs=None, f_eps=None, shifted=False):
    """L_{mu,eps} = [[(d_x + i mu)(c+p), mult], [-(1+a), (c+p)(d_x + i mu)]]."""
    f_eps = _resolve(coeffs, f_eps)
    n, kmu, P, A, mult = _blocks(h, mu, M, coeffs, f_eps)
    c = np.sqrt(np.tanh(h))
    I = np.eye(n)
    dx = np.diag(1j * kmu)
    CP = c * I + P
    L = np.block([[dx @ CP, mult], [-(I + A), CP @ dx]])
    if shifted:
        L = L - 1j * c * mu * np.eye(2 * n)
    return OperatorMatrix(L, M, float(h), float(mu), float(eps), "Ls" if shifted else "L")


def sort_spectrum(values):
    values = np.asarray(values)
    return values[np.lexsort((values.real, values.imag))]


def full_spectrum(Lmat):
    """All eigenvalues of a truncated operator, ordered by (imaginary, real) part."""
    A = Lmat.entries if isinstance(Lmat, OperatorMatrix) else np.asarray(Lmat)
    if not np.all(np.isfinite(A)):
        raise EigenError("matrix has non-finite entries")
    try:
        vals = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise EigenError(f"eigensolver failed (condition estimate {np.linalg.cond(A):.3e})") from exc
    return sort_spectrum(vals)


def flat_eigenvalues(h, mu, M):
    """Eigenvalues lambda_k^{+-}(mu), |k| <= M, of the operator at eps = 0."""
    c = np.sqrt(np.tanh(h))
    k = np.arange(-M, M + 1).astype(float)
    w = lambda q: np.sqrt(np.abs(q) * np.tanh(h * np.abs(q)))
    plus = 1j * (c * (k + mu) - w(k + mu))
    minus = 1j * (c * (-k + mu) + w(k - mu))
    return sort_spectrum(np.r_[plus, minus])
