"""Second-order Stokes wave, Dirichlet-Neumann expansion, conformal change of
variables and the coefficient functions p_eps, a_eps of the linearized problem.

Periodic functions are stored as truncated Fourier series u(x) = sum_k u_k e^{ikx},
|k| <= M, so that the mean of |u|^2 over a period is sum_k |u_k|^2.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .coeffs import check_depth

DEFAULT_M = 32


class TruncationError(ValueError):
    """Raised when two fields do not share the same truncation order."""


class ConvergenceError(RuntimeError):
    """Raised when an iteration fails to converge."""


@dataclass
class FourierField:
    """Coefficients u_k for k = -M..M, stored at index k + M."""

    coeffs: np.ndarray
    M: int
    parity: Optional[str] = None

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (2 * self.M + 1,):
            raise TruncationError(f"expected {2 * self.M + 1} coefficients, got {self.coeffs.shape}")
        if self.parity is not None:
            check_parity(self, self.parity)

    @classmethod
    def zeros(cls, M, parity=None):
        return cls(np.zeros(2 * M + 1, complex), M, parity)

    @classmethod
    def from_trig(cls, M, const=0.0, cos=(), sin=(), parity=None):
        """Build a_0 + sum a_k cos kx + sum b_k sin kx; cos/sin map k -> amplitude."""
        u = np.zeros(2 * M + 1, complex)
        u[M] += const
        for k, a in dict(cos).items():
            u[M + k] += a / 2
            u[M - k] += a / 2
        for k, b in dict(sin).items():
            u[M + k] += -0.5j * b
            u[M - k] += 0.5j * b
        return cls(u, M, parity)

    @classmethod
    def from_grid(cls, values, M, parity=None):
        """Discrete Fourier analysis of samples on x_j = 2 pi j / N."""
        values = np.asarray(values)
        N = values.size
        if N <= 2 * M:
            raise TruncationError("grid too coarse for requested truncation")
        hat = np.fft.fft(values) / N
        k = np.arange(-M, M + 1)
        return cls(hat[k % N], M, parity)

    @property
    def modes(self):
        return np.arange(-self.M, self.M + 1)

    def __getitem__(self, k):
        return self.coeffs[self.M + k] if abs(k) <= self.M else 0.0

    def mean(self):
        return self.coeffs[self.M]

    def cos_coeff(self, k):
        """Amplitude of cos kx (k >= 1) for a real field."""
        return 2 * (self.coeffs[self.M + k]).real

    def sin_coeff(self, k):
        """Amplitude of sin kx (k >= 1) for a real field."""
        return -2 * (self.coeffs[self.M + k]).imag

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(1j * np.multiply.outer(x, self.modes)) @ self.coeffs

    def grid_values(self, N):
        return self.evaluate(2 * np.pi * np.arange(N) / N)

    def derivative(self, n=1):
        return FourierField((1j * self.modes) ** n * self.coeffs, self.M)

    def multiplier(self, symbol):
        return FourierField(symbol(self.modes.astype(float)) * self.coeffs, self.M)

    def __add__(self, other):
        same_truncation(self, other)
        return FourierField(self.coeffs + other.coeffs, self.M)

    def __sub__(self, other):
        same_truncation(self, other)
        return FourierField(self.coeffs - other.coeffs, self.M)

    def scale(self, s):
        return FourierField(s * self.coeffs, self.M)

    def __mul__(self, other):
        """Product as an exact convolution, modes beyond M discarded."""
        same_truncation(self, other)
        full = np.convolve(self.coeffs, other.coeffs)
        return FourierField(full[self.M:3 * self.M + 1], self.M)

    def l2norm(self):
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))


def same_truncation(u, v):
    if u.M != v.M:
        raise TruncationError(f"truncation mismatch: {u.M} vs {v.M}")


def check_parity(u, parity, tol=1e-12):
    """Verify that a real field is even (cosines only) or odd (sines only)."""
    c = u.coeffs
    scale = max(1.0, np.max(np.abs(c)))
    real_ok = np.max(np.abs(c - np.conj(c[::-1]))) <= tol * scale
    if parity == "even":
        ok = np.max(np.abs(c.imag)) <= tol * scale
    elif parity == "odd":
        ok = np.max(np.abs(c.real)) <= tol * scale
    else:
        raise ValueError(f"unknown parity {parity!r}")
    if not (ok and real_ok):
        raise ValueError(f"field is not real and {parity}")
    return True


# Stokes wave

@dataclass
class StokesExpansion:
    h: float
    M: int
    c0: float
    c1: float
    c2: float
    eta2_0: float
    eta2_2: float
    psi2_2: float
    eta1: FourierField = field(repr=False)
    psi1: FourierField = field(repr=False)
    eta2: FourierField = field(repr=False)
    psi2: FourierField = field(repr=False)

    def eta(self, eps):
        return self.eta1.scale(eps) + self.eta2.scale(eps**2)

    def psi(self, eps):
        return self.psi1.scale(eps) + self.psi2.scale(eps**2)

    def speed(self, eps):
        return self.c0 + eps * self.c1 + eps**2 * self.c2


def stokes_expansion(h, M=DEFAULT_M):
    """Coefficients of the Stokes wave up to second order in the amplitude."""
    h = check_depth(h)
    c = np.sqrt(np.tanh(h))
    c4 = c**4
    eta2_0 = (c4 - 1) / (4 * c**2)
    eta2_2 = (3 - c4) / (4 * c**6)
    psi2_2 = (3 + c**8) / (8 * c**7)
    c2 = (-2 * c**12 + 13 * c**8 - 12 * c4 + 9) / (16 * c**7)
    return StokesExpansion(
        h=h, M=M, c0=float(c), c1=0.0, c2=float(c2),
        eta2_0=float(eta2_0), eta2_2=float(eta2_2), psi2_2=float(psi2_2),
        eta1=FourierField.from_trig(M, cos={1: 1.0}, parity="even"),
        psi1=FourierField.from_trig(M, sin={1: 1 / c}, parity="odd"),
        eta2=FourierField.from_trig(M, const=eta2_0, cos={2: eta2_2}, parity="even"),
        psi2=FourierField.from_trig(M, sin={2: psi2_2}, parity="odd"),
    )


# Dirichlet-Neumann operator

def dirichlet_neumann(eta, psi, h, order=2):
    """(G_0 + G_1(eta) + G_2(eta)) psi, truncated at the requested order."""
    same_truncation(eta, psi)
    h = float(h)
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    D = lambda u: u.multiplier(lambda k: k)
    T = lambda u: u.multiplier(lambda k: np.tanh(h * k))
    G0 = lambda u: u.multiplier(lambda k: k * np.tanh(h * k))

    out = G0(psi)
    if order >= 1:
        out = out + D(eta * D(psi)) - G0(eta * G0(psi))
    if order >= 2:
        eta2 = eta * eta
        t1 = D(eta2 * G0(psi))
        t2 = T(eta2 * D(D(psi)))
        t3 = T(eta * G0(eta * G0(psi)))
        out = out - D(t1 + t2 - t3.scale(2)).scale(0.5)
    return out


def traveling_residual(h, eps, M=DEFAULT_M):
    """Max L2 residual of both traveling-wave equations for the truncated wave."""
    st = stokes_expansion(h, M)
    eta, psi, c = st.eta(eps), st.psi(eps), st.speed(eps)
    N = 4 * M
    ex = eta.derivative().grid_values(N).real
    px = psi.derivative().grid_values(N).real
    ev = eta.grid_values(N).real
    r1 = -c * px + ev + 0.5 * px**2 - ex**2 * (c - px) ** 2 / (2 * (1 + ex**2))
    r2 = eta.derivative().scale(c) + dirichlet_neumann(eta, psi, h, order=2)
    return max(float(np.sqrt(np.mean(r1**2))), r2.l2norm())


# Conformal change of variables

@dataclass
class ConformalData:
    p_frak: FourierField
    f_eps: float
    iterations: int
    residual: float


def _compose(u_func, p_frak, N):
    """Samples of u(x + p(x)) on the uniform N-point grid."""
    x = 2 * np.pi * np.arange(N) / N
    return u_func(x + p_frak.grid_values(N).real)


def conformal_fixed_point(h, eps, M=DEFAULT_M, tol=1e-14, max_iter=200):
    """Picard iteration for p = H / tanh((h+f)|D|) [eta(x + p(x))], f = mean of eta(x+p)."""
    h = check_depth(h)
    eta = stokes_expansion(h, M).eta(eps)
    N = 4 * M
    k = np.arange(-M, M + 1)
    p = FourierField.zeros(M)
    f = 0.0
    for it in range(1, max_iter + 1):
        g = FourierField.from_grid(_compose(lambda y: eta.evaluate(y).real, p, N), M)
        f_new = float(g.mean().real)
        with np.errstate(divide="ignore", invalid="ignore"):
            mult = np.where(k == 0, 0.0, -1j * np.sign(k) / np.tanh((h + f_new) * np.abs(k)))
        p_new = FourierField(mult * g.coeffs, M)
        diff = max(np.max(np.abs(p_new.coeffs - p.coeffs)), abs(f_new - f))
        p, f = p_new, f_new
        if diff < tol:
            return ConformalData(FourierField(p.coeffs, M, "odd"), f, it, float(diff))
    raise ConvergenceError(f"conformal fixed point did not converge in {max_iter} iterations")


# Coefficient functions p_eps, a_eps

@dataclass
class CoefficientFunctions:
    h: float
    eps: float
    p_eps: FourierField
    a_eps: FourierField
    f_eps: float
    p1_1: float
    p2_0: float
    p2_2: float
    a1_1: float
    a2_0: float
    a2_2: float
    conformal: Optional[ConformalData] = field(default=None, repr=False)


def expansion_coefficients(h):
    """Closed-form first and second order coefficients of p_eps and a_eps."""
    c = np.sqrt(np.tanh(h))
    c4 = c**4
    return dict(
        p1_1=-2 / c,
        p2_0=(9 + 12 * c4 + 5 * c**8 - 2 * c**12) / (16 * c**7),
        p2_2=-(3 + c4) / (2 * c**7),
        a1_1=-(c**2 + c**-2),
        a2_0=1.5 + 0.5 / c4,
        a2_2=(-14 * c4 + 9 * c**8 - 3) / (4 * c**8),
    )


def surface_velocities(st, eps):
    """Callables y -> (B, V, B_x) for the truncated Stokes wave, evaluated pointwise."""
    eta, psi, c = st.eta(eps), st.psi(eps), st.speed(eps)
    ex, exx = eta.derivative(), eta.derivative(2)
    px, pxx = psi.derivative(), psi.derivative(2)

    def fields(y):
        a, a2 = ex.evaluate(y).real, exx.evaluate(y).real
        b, b2 = px.evaluate(y).real, pxx.evaluate(y).real
        num = (b - c) * a
        den = 1 + a * a
        B = num / den
        V = -B * a + b
        Bx = ((b2 * a + (b - c) * a2) * den - num * 2 * a * a2) / den**2
        return B, V, Bx

    return fields


def coefficient_functions(h, eps, M=DEFAULT_M, tol=1e-14):
    """p_eps, a_eps as Fourier fields plus their closed-form expansion coefficients."""
    h = check_depth(h)
    st = stokes_expansion(h, M)
    conf = conformal_fixed_point(h, eps, M, tol=tol)
    N = 4 * M
    x = 2 * np.pi * np.arange(N) / N
    pf = conf.p_frak
    _, V, Bx = surface_velocities(st, eps)(x + pf.grid_values(N).real)
    jac = 1 + pf.derivative().grid_values(N).real
    c_eps = st.speed(eps)
    p_vals = (c_eps - V) / jac - st.c0
    a_vals = (1 + (V - c_eps) * Bx) / jac - 1
    p = FourierField.from_grid(p_vals, M)
    a = FourierField.from_grid(a_vals, M)
    return CoefficientFunctions(
        h=h, eps=float(eps),
        p_eps=FourierField(p.coeffs, M, "even"),
        a_eps=FourierField(a.coeffs, M, "even"),
        f_eps=conf.f_eps, conformal=conf, **expansion_coefficients(h),
    )
