"""Kato similarity reduction of the shifted operator to a 4x4 matrix.

The spectral projector on the near-zero eigenvalues is computed by trapezoidal
quadrature of the resolvent on a circle; the transformation operator then maps
the unperturbed generalized kernel onto the perturbed invariant subspace while
preserving the symplectic and reversible structure.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import binom

from .operator import (
    OperatorMatrix, assemble_B, assemble_L, symplectic_form, reversibility_signs,
)
from .stokes import DEFAULT_M, coefficient_functions


class ProjectorError(RuntimeError):
    """Raised when the contour projector does not have rank 4."""


class SeriesError(RuntimeError):
    """Raised when the inverse square root series cannot converge."""


class BasisError(RuntimeError):
    """Raised when the transported basis is not symplectic."""


J2 = np.array([[0, 1], [-1, 0]], dtype=complex)
J4 = np.kron(np.eye(2), J2)


@dataclass
class Contour:
    radius: float
    nodes: int = 64
    center: complex = 0.0


def flat_gap(h, mu):
    """Distance from 0 to the nearest eigenvalue of the shifted flat operator outside the zero cluster."""
    c = np.sqrt(np.tanh(h))
    w = lambda q: np.sqrt(np.abs(q) * np.tanh(h * np.abs(q)))
    k = np.arange(-6, 7).astype(float)
    vals = []
    for kk in k:
        for sign in (1, -1):
            lam = 1j * (c * (kk + mu) - sign * w(kk + mu)) - 1j * c * mu
            if (kk, sign) in ((0, 1), (0, -1), (1, 1), (-1, -1)):
                continue
            vals.append(abs(lam))
    return min(vals)


def default_contour(h, mu=0.0, nodes=64):
    return Contour(radius=min(0.4 * flat_gap(h, mu), 0.2), nodes=nodes)


def spectral_projector(Lmat, contour):
    """P = -(1/2 pi i) loop (L - lam)^{-1} dlam by the N-point trapezoidal rule."""
    A = Lmat.entries if isinstance(Lmat, OperatorMatrix) else np.asarray(Lmat)
    n = A.shape[0]
    I = np.eye(n)
    theta = 2 * np.pi * (np.arange(contour.nodes) + 0.5) / contour.nodes
    lam = contour.center + contour.radius * np.exp(1j * theta)
    P = np.zeros((n, n), complex)
    for z in lam:
        try:
            R = np.linalg.solve(A - z * I, I)
        except np.linalg.LinAlgError as exc:
            raise ProjectorError(f"resolvent singular at node {z}; perturb the radius") from exc
        P -= (z - contour.center) * R
    P /= contour.nodes
    sv = np.linalg.svd(P, compute_uv=False)
    rank = int(np.sum(sv > 0.5))
    if rank != 4:
        raise ProjectorError(f"projector has rank {rank}, expected 4")
    return P


def inverse_sqrt_series(R, tol=1e-14, max_terms=500):
    """(Id - R)^{-1/2} = sum_k binom(-1/2, k) (-R)^k."""
    if np.linalg.norm(R, 2) >= 1:
        raise SeriesError("||R|| >= 1: outside the perturbative regime")
    n = R.shape[0]
    out = np.eye(n, dtype=complex)
    power = np.eye(n, dtype=complex)
    for k in range(1, max_terms):
        power = -power @ R
        term = binom(-0.5, k) * power
        out += term
        if np.max(np.abs(term)) < tol:
            return out
    raise SeriesError("binomial series did not reach tolerance")


def transformation_operator(P, P00):
    """U = (Id - (P - P00)^2)^{-1/2} [P P00 + (Id - P)(Id - P00)]."""
    n = P.shape[0]
    I = np.eye(n)
    D = P - P00
    if np.linalg.norm(D, 2) >= 1:
        raise SeriesError("||P - P00|| >= 1: outside the perturbative regime")
    return inverse_sqrt_series(D @ D) @ (P @ P00 + (I - P) @ (I - P00))


def unperturbed_basis(h, M):
    """f1+, f1-, f0+, f0- as columns, in the eta-modes then psi-modes layout."""
    c = np.sqrt(np.tanh(h))
    n = 2 * M + 1
    F = np.zeros((2 * n, 4), complex)
    # f1+ = (c^{1/2} cos x, c^{-1/2} sin x)
    F[M + 1, 0] = F[M - 1, 0] = 0.5 * c**0.5
    F[n + M + 1, 0], F[n + M - 1, 0] = -0.5j * c**-0.5, 0.5j * c**-0.5
    # f1- = (-c^{1/2} sin x, c^{-1/2} cos x)
    F[M + 1, 1], F[M - 1, 1] = 0.5j * c**0.5, -0.5j * c**0.5
    F[n + M + 1, 1] = F[n + M - 1, 1] = 0.5 * c**-0.5
    F[M, 2] = 1.0
    F[n + M, 3] = 1.0
    return F


def scalar(u, v):
    """Normalized L2 pairing (u, v) = sum u conj(v)."""
    return np.vdot(v, u)


@dataclass
class KatoBasis:
    vectors: np.ndarray
    unperturbed: np.ndarray
    P: np.ndarray = field(repr=False)
    P00: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)

    def gram(self):
        """Symplectic Gram matrix W[i, j] = (J f_j, f_i)."""
        n = self.vectors.shape[0] // 2
        J = symplectic_form((n - 1) // 2)
        F = self.vectors
        return F.conj().T @ J @ F


@dataclass
class ReducedQuadruple:
    B4: np.ndarray
    h: float
    mu: float
    eps: float
    stage: str = "kato"

    @property
    def L4(self):
        return J4 @ self.B4

    @property
    def E(self):
        return self.B4[:2, :2]

    @property
    def F(self):
        return self.B4[:2, 2:]

    @property
    def G(self):
        return self.B4[2:, 2:]

    def eigenvalues(self, shift=True):
        c = np.sqrt(np.tanh(self.h))
        ev = np.linalg.eigvals(self.L4)
        return ev + 1j * c * self.mu if shift else ev

    def pattern_defect(self):
        """Largest violation of the real/imaginary checkerboard pattern."""
        i, j = np.indices((4, 4))
        even = (i + j) % 2 == 0
        return max(np.max(np.abs(self.B4.imag[even]), initial=0.0),
                   np.max(np.abs(self.B4.real[~even]), initial=0.0))

    def hermitian_defect(self):
        return float(np.max(np.abs(self.B4 - self.B4.conj().T)))

    def to_dict(self):
        return dict(stage=self.stage, h=self.h, mu=self.mu, eps=self.eps,
                    B4=[[[z.real, z.imag] for z in row] for row in self.B4])

    @classmethod
    def from_blocks(cls, E, F, G, h, mu, eps, stage):
        B4 = np.block([[E, F], [F.conj().T, G]])
        return cls(B4, h, mu, eps, stage)


def kato_basis(Ls, P00, contour):
    """Transport the unperturbed basis with the transformation operator."""
    P = spectral_projector(Ls, contour)
    U = transformation_operator(P, P00)
    F0 = unperturbed_basis(Ls.h, Ls.M)
    return KatoBasis(vectors=U @ F0, unperturbed=F0, P=P, P00=P00, U=U)


def reduced_matrix(Bs, basis, h, mu, eps=0.0, tol=1e-6):
    """B4[i, j] = (B f_j, f_i) in the order f1+, f1-, f0+, f0-."""
    W = basis.gram()
    if np.max(np.abs(W - J4)) > tol:
        raise BasisError("transported basis is not symplectic")
    A = Bs.entries if isinstance(Bs, OperatorMatrix) else Bs
    F = basis.vectors
    B4 = F.conj().T @ A @ F
    return ReducedQuadruple(B4, float(h), float(mu), float(eps))


@dataclass
class KatoReduction:
    quadruple: ReducedQuadruple
    basis: KatoBasis
    Ls: OperatorMatrix = field(repr=False)
    Bs: OperatorMatrix = field(repr=False)
    L: OperatorMatrix = field(repr=False)
    contour: Contour


def reduce_operator(h, eps, mu, M=DEFAULT_M, coeffs=None, nodes=64):
    """Full numeric path: coefficient functions, operators, projector, basis and B4."""
    if coeffs is None:
        coeffs = coefficient_functions(h, eps, M)
    contour = default_contour(h, mu, nodes)
    Ls = assemble_L(h, eps, mu, M, coeffs, shifted=True)
    Bs = assemble_B(h, eps, mu, M, coeffs, shifted=True)
    L00 = assemble_L(h, 0.0, 0.0, M, None, 0.0, shifted=True)
    P00 = spectral_projector(L00, default_contour(h, 0.0, nodes))
    basis = kato_basis(Ls, P00, contour)
    quad = reduced_matrix(Bs, basis, h, mu, eps)
    L = assemble_L(h, eps, mu, M, coeffs)
    return KatoReduction(quad, basis, Ls, Bs, L, contour)
