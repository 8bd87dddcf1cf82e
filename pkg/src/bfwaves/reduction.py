"""Block decoupling of the 4x4 Hamiltonian and reversible matrix.

Pipeline: singular symplectic rescaling, one explicit decoupling step obtained
from a 4x4 real Sylvester system, then full decoupling by fixed-point iteration
of the nonlinear homological equation. The same operations run on numerically
extracted matrices and on the analytic leading-order ones.
"""

from dataclasses import dataclass, field

import numpy as np

from .coeffs import depth_coefficients
from .kato import J2, J4, ReducedQuadruple


class SingularSylvesterError(ArithmeticError):
    """Raised when the Sylvester matrix is numerically singular."""


class DecouplingError(RuntimeError):
    """Raised when full decoupling fails to converge."""


@dataclass(frozen=True)
class SylvesterCoefficients:
    a: float
    b: float
    c: float
    d: float
    e: float


def sylvester_matrix(co):
    a, b, c, d, e = co.a, co.b, co.c, co.d, co.e
    return np.array([
        [a, b, c, 0],
        [d, a, 0, -c],
        [e, 0, a, -b],
        [0, -e, -d, a],
    ], dtype=float)


def sylvester_det(co):
    a, b, c, d, e = co.a, co.b, co.c, co.d, co.e
    return a**4 - 2 * a * a * (b * d + c * e) + (b * d - c * e) ** 2


def sylvester_inverse(co, min_det=1e-6):
    """Closed-form inverse of the Sylvester matrix.

    The singularity guard is relative: |det A| must exceed min_det * s^4 with
    s the largest coefficient modulus, since det A is homogeneous of degree 4.
    """
    a, b, c, d, e = co.a, co.b, co.c, co.d, co.e
    det = sylvester_det(co)
    scale = max(abs(a), abs(b), abs(c), abs(d), abs(e))
    if abs(det) <= min_det * scale**4:
        raise SingularSylvesterError(f"|det A| = {abs(det):.3e} too small")
    a2, bd, ce = a * a, b * d, c * e
    adj = np.array([
        [a * (a2 - bd - ce), b * (-a2 + bd - ce), -c * (a2 + bd - ce), -2 * a * b * c],
        [d * (-a2 + bd - ce), a * (a2 - bd - ce), 2 * a * c * d, -c * (-a2 - bd + ce)],
        [-e * (a2 + bd - ce), 2 * a * b * e, a * (a2 - bd - ce), b * (a2 - bd + ce)],
        [-2 * a * d * e, -e * (-a2 - bd + ce), d * (a2 - bd + ce), a * (a2 - bd - ce)],
    ])
    return adj / det


def split_entries(q):
    """Real parameters of the reversible block pattern."""
    E, F, G = q.E, q.F, q.G
    return dict(
        E11=E[0, 0].real, E12=E[0, 1].imag, E22=E[1, 1].real,
        G11=G[0, 0].real, G12=G[0, 1].imag, G22=G[1, 1].real,
        F11=F[0, 0].real, F12=F[0, 1].imag, F21=F[1, 0].imag, F22=F[1, 1].real,
    )


def singular_rescaling(q, mu):
    """B' = Y* B Y with Y = diag(Q, Q), Q = diag(mu^{1/2}, mu^{-1/2})."""
    if mu <= 0:
        raise ValueError("rescaling requires mu > 0")
    Q = np.diag([np.sqrt(mu), 1 / np.sqrt(mu)])
    Y = np.kron(np.eye(2), Q)
    return ReducedQuadruple(Y @ q.B4 @ Y, q.h, q.mu, q.eps, "rescaled")


def homological_coefficients(q):
    s = split_entries(q)
    return SylvesterCoefficients(
        a=s["G12"] - s["E12"], b=s["G11"], c=s["E22"], d=s["G22"], e=s["E11"],
    )


def solve_homological(q, F=None):
    """X = [[x11, i x12], [i x21, x22]] solving J2E X - X J2G = -J2 F."""
    F = q.F if F is None else F
    co = homological_coefficients(q)
    rhs = np.array([-F[1, 0].imag, F[1, 1].real, -F[0, 0].real, F[0, 1].imag])
    x = sylvester_inverse(co) @ rhs
    return np.array([[x[0], 1j * x[1]], [1j * x[2], x[3]]])


def homological_residual(q, X, F=None):
    F = q.F if F is None else F
    D1, D0 = J2 @ q.E, J2 @ q.G
    return float(np.max(np.abs(D1 @ X - X @ D0 + J2 @ F)))


def expm_small(A, order=6):
    """Matrix exponential by scaling and squaring of a truncated Taylor series."""
    A = np.asarray(A, dtype=complex)
    norm = np.max(np.sum(np.abs(A), axis=1))
    s = max(0, int(np.ceil(np.log2(norm / 2**-8))) if norm > 0 else 0)
    X = A / 2**s
    out = np.eye(A.shape[0], dtype=complex)
    term = np.eye(A.shape[0], dtype=complex)
    for k in range(1, order + 1):
        term = term @ X / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def generator(X):
    """S = J4 [[0, Sigma], [Sigma*, 0]] with Sigma = J2 X."""
    Sig = J2 @ X
    Z = np.zeros((2, 2), complex)
    return J4 @ np.block([[Z, Sig], [Sig.conj().T, Z]])


def conjugate(L4, S):
    return expm_small(S) @ L4 @ expm_small(-S)


def as_quadruple(L4, like, stage):
    # B = J4^{-1} L = -J4 L
    return ReducedQuadruple(-J4 @ L4, like.h, like.mu, like.eps, stage)


def decouple_step(q, X):
    """One symplectic conjugation exp(S) L exp(-S) killing the leading off-diagonal block."""
    L2 = conjugate(q.L4, generator(X))
    return as_quadruple(L2, q, "step")


def off_diagonal(L4):
    return float(max(np.max(np.abs(L4[:2, 2:])), np.max(np.abs(L4[2:, :2]))))


@dataclass
class DecoupledPair:
    U_block: np.ndarray
    S_block: np.ndarray
    off_diagonal_residual: float
    iterations: int
    correction: np.ndarray = field(repr=False)
    final: ReducedQuadruple = field(repr=False)

    def eigenvalues(self):
        return np.r_[np.linalg.eigvals(self.U_block), np.linalg.eigvals(self.S_block)]

    def to_dict(self):
        pack = lambda A: [[[z.real, z.imag] for z in row] for row in A]
        return dict(U_block=pack(self.U_block), S_block=pack(self.S_block),
                    off_diagonal_residual=self.off_diagonal_residual,
                    iterations=self.iterations)


def full_decouple(q, tol=1e-12, max_iter=50):
    """Fixed-point solution of [S, D] = -R - Rem(S) until the off-diagonal block is below tol."""
    L = q.L4
    Z = np.zeros((2, 2), complex)
    D = np.block([[L[:2, :2], Z], [Z, L[2:, 2:]]])
    S = np.zeros((4, 4), complex)
    Lc = L
    prev = np.inf
    for it in range(max_iter + 1):
        off = off_diagonal(Lc)
        if off <= tol:
            c = np.sqrt(np.tanh(q.h))
            shift = 1j * c * q.mu * np.eye(2)
            final = as_quadruple(Lc, q, "decoupled")
            corr = np.block([[Lc[:2, :2], Z], [Z, Lc[2:, 2:]]]) - D
            return DecoupledPair(shift + Lc[:2, :2], shift + Lc[2:, 2:], off, it, corr, final)
        if off > prev:
            raise DecouplingError(f"off-diagonal residual increased at iteration {it}")
        prev = off
        # upper-right block of R + Rem(S) = Pi(Lc) - [S, D]
        phi = Lc[:2, 2:] - (S @ D - D @ S)[:2, 2:]
        X = solve_homological(q, F=-J2 @ phi)
        S = generator(X)
        Lc = conjugate(L, S)
    raise DecouplingError(f"no convergence after {max_iter} iterations (residual {off:.3e})")


def analytic_quadruple(h, mu, eps):
    """Leading-order matrix with entries from the closed-form depth coefficients."""
    d = depth_coefficients(h)
    E = np.array([
        [d.e_11 * eps**2 - d.e_22 * mu**2 / 8, 0.5j * d.e_12 * mu],
        [-0.5j * d.e_12 * mu, -d.e_22 * mu**2 / 8],
    ])
    F = np.array([[d.f_11 * eps, 1j * mu * eps / np.sqrt(d.c_h)], [0, 0]], dtype=complex)
    G = np.diag([1.0, mu * np.tanh(h * mu)]).astype(complex)
    return ReducedQuadruple.from_blocks(E, F, G, float(h), float(mu), float(eps), "analytic")


@dataclass
class PipelineStages:
    kato: ReducedQuadruple
    rescaled: ReducedQuadruple
    X: np.ndarray
    step: ReducedQuadruple
    pair: DecoupledPair


def run_pipeline(q, tol=1e-12):
    """Rescale, decouple once, then decouple fully."""
    q1 = singular_rescaling(q, q.mu)
    X = solve_homological(q1)
    q2 = decouple_step(q1, X)
    return PipelineStages(q, q1, X, q2, full_decouple(q2, tol))
