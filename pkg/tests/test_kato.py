import numpy as np
import pytest

from bfwaves.coeffs import depth_coefficients
from bfwaves.kato import (
    J4, Contour, ProjectorError, SeriesError, default_contour, flat_gap, inverse_sqrt_series,
    reduce_operator, spectral_projector, transformation_operator, unperturbed_basis,
)
from bfwaves.operator import assemble_B, assemble_L, full_spectrum, symplectic_form
from bfwaves.spectrum import near_zero
from bfwaves.validation import multiset_distance


def test_unperturbed_basis_in_kernel():
    h = 1.0
    F = unperturbed_basis(h, 16)
    Ls = assemble_L(h, 0.0, 0.0, 16, shifted=True).entries
    # f1+, f1-, f0- are kernel vectors, f0+ is a generalized one (L f0+ = -f0-)
    assert np.max(np.abs(Ls @ F[:, [0, 1, 3]])) <= 1e-15
    assert np.max(np.abs(Ls @ F[:, 2] + F[:, 3])) <= 1e-15
    J = symplectic_form(16)
    assert np.max(np.abs(F.conj().T @ J @ F - J4)) <= 1e-15


def test_flat_projector():
    h = 1.0
    L00 = assemble_L(h, 0.0, 0.0, 16, shifted=True)
    P = spectral_projector(L00, default_contour(h))
    F = unperturbed_basis(h, 16)
    assert np.max(np.abs(P @ F - F)) <= 1e-12
    assert np.trace(P).real == pytest.approx(4, abs=1e-12)
    J = symplectic_form(16)
    assert np.max(np.abs(J @ P - P.conj().T @ J)) <= 1e-12
    assert np.max(np.abs(P @ P - P)) <= 1e-12


def test_projector_rank_check():
    L00 = assemble_L(1.0, 0.0, 0.0, 8, shifted=True)
    with pytest.raises(ProjectorError):
        spectral_projector(L00, Contour(radius=1.5))


@pytest.mark.parametrize("h", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("mu", [0.0, 0.02, 0.1])
def test_flat_gap_is_fifth_modulus(h, mu):
    ev = full_spectrum(assemble_L(h, 0.0, mu, 8, shifted=True))
    assert flat_gap(h, mu) == pytest.approx(np.sort(np.abs(ev))[4], abs=1e-12)


def test_inverse_sqrt_series():
    rng = np.random.default_rng(3)
    A = rng.normal(size=(5, 5))
    R = 0.3 * A @ A.T / np.linalg.norm(A @ A.T, 2)
    S = inverse_sqrt_series(R)
    assert np.max(np.abs(S @ S @ (np.eye(5) - R) - np.eye(5))) <= 1e-13
    with pytest.raises(SeriesError):
        inverse_sqrt_series(2 * np.eye(2))


def test_identity_transformation_at_base_point():
    L00 = assemble_L(1.0, 0.0, 0.0, 8, shifted=True)
    P = spectral_projector(L00, default_contour(1.0))
    assert np.max(np.abs(transformation_operator(P, P) - np.eye(P.shape[0]))) <= 1e-13


def test_transformation_properties(reduction):
    kr = reduction(2.0, 0.02, 0.02)
    P, P00, U = kr.basis.P, kr.basis.P00, kr.basis.U
    J = symplectic_form(32)
    assert np.max(np.abs(U @ P00 - P @ U)) <= 1e-10
    assert np.max(np.abs(U.conj().T @ J @ U - J)) <= 1e-10
    assert np.max(np.abs(kr.basis.gram() - J4)) <= 1e-10


def test_real_transformation_at_zero_floquet(reduction):
    kr = reduction(1.0, 0.01, 0.0)
    assert kr.quadruple.pattern_defect() <= 1e-12
    assert np.max(np.abs(kr.quadruple.B4.imag)) <= 1e-10


def test_flat_reduced_matrix():
    h, mu = 1.0, 0.05
    d = depth_coefficients(h)
    q = reduce_operator(h, 0.0, mu, 32).quadruple
    B = q.B4
    c = d.c_h
    w = lambda k: np.sqrt(k * np.tanh(h * k))
    # flat state: F = 0, G = diag(1, mu tanh(h mu)), exact eigenvalues
    assert np.max(np.abs(q.F)) <= 1e-12
    assert B[2, 2].real == pytest.approx(1.0, abs=1e-12)
    assert B[3, 3].real == pytest.approx(mu * np.tanh(h * mu), abs=1e-12)
    exact = [1j * (c * (1 + mu) - w(1 + mu)), 1j * (c * (mu - 1) + w(1 - mu)),
             1j * (c * mu - w(mu)), 1j * (c * mu + w(mu))]
    assert multiset_distance(q.eigenvalues(), exact) <= 1e-12
    # leading entries
    assert B[0, 1].imag == pytest.approx(0.5 * d.e_12 * mu, rel=0.05)
    assert B[1, 1].real / mu**2 == pytest.approx(-d.e_22 / 8, rel=0.05)


@pytest.mark.parametrize("h", [1.0, 2.0])
def test_entry_expansions(reduction, h):
    d = depth_coefficients(h)
    eps = 0.005
    B = reduction(h, eps, 0.0).quadruple.B4
    assert B[0, 0].real / eps**2 == pytest.approx(d.e_11, rel=0.02)
    assert B[0, 2].real / eps == pytest.approx(d.f_11, rel=0.02, abs=1e-3)
    B = reduction(h, eps, eps).quadruple.B4
    assert B[0, 3].imag / eps**2 == pytest.approx(1 / np.sqrt(d.c_h), rel=0.05)


def test_structure_and_eigenvalues(reduction):
    kr = reduction(2.0, 0.01, 0.005)
    q = kr.quadruple
    assert q.hermitian_defect() <= 1e-12
    assert q.pattern_defect() <= 1e-12
    assert multiset_distance(q.eigenvalues(), near_zero(full_spectrum(kr.L))) <= 1e-12


@pytest.mark.parametrize("h", [1.0, 2.0])
def test_entry_E22_at_zero_floquet_scaling(reduction, h):
    # E22(0, eps) vanishes for the exact wave; for the eps^2-truncated one it is O(eps^4)
    vals = [abs(reduction(h, e, 0.0).quadruple.B4[1, 1]) for e in (0.02, 0.01, 0.005)]
    ratios = np.array(vals[:-1]) / np.array(vals[1:])
    assert np.all((ratios > 12) & (ratios < 20))


@pytest.mark.xfail(strict=True, reason="truncated Stokes wave leaves an O(eps^4) E22(0, eps)")
def test_entry_E22_at_zero_floquet_absolute(reduction):
    assert abs(reduction(1.0, 0.02, 0.0).quadruple.B4[1, 1]) <= 1e-8


def test_quadrature_converged():
    a = reduce_operator(2.0, 0.01, 0.01, 32, nodes=64).quadruple.B4
    b = reduce_operator(2.0, 0.01, 0.01, 32, nodes=128).quadruple.B4
    assert np.max(np.abs(a - b)) <= 1e-12
