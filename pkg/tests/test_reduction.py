import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm, solve_sylvester

from bfwaves.coeffs import depth_coefficients
from bfwaves.kato import J2, J4, ReducedQuadruple
from bfwaves.reduction import (
    SingularSylvesterError, SylvesterCoefficients, analytic_quadruple, decouple_step,
    expm_small, full_decouple, generator, homological_residual, off_diagonal, run_pipeline,
    singular_rescaling, solve_homological, sylvester_det, sylvester_inverse, sylvester_matrix,
)
from bfwaves.validation import cofactor_det, multiset_distance

coef = st.floats(-3, 3, allow_nan=False)


def test_sylvester_examples():
    co = SylvesterCoefficients(1, 0, 0, 0, 0)
    assert sylvester_det(co) == 1
    assert np.allclose(sylvester_inverse(co), np.eye(4))
    co = SylvesterCoefficients(2, 1, -1, 3, 0.5)
    assert sylvester_det(co) == pytest.approx(cofactor_det(sylvester_matrix(co)), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(coef, coef, coef, coef, coef)
def test_sylvester_det_and_inverse(a, b, c, d, e):
    co = SylvesterCoefficients(a, b, c, d, e)
    A = sylvester_matrix(co)
    ref = cofactor_det(A)
    assert abs(sylvester_det(co) - ref) <= 1e-11 * max(1, abs(ref))
    if abs(ref) > 1e-3:
        assert np.allclose(sylvester_inverse(co) @ A, np.eye(4), atol=1e-8)


def test_sylvester_singular():
    with pytest.raises(SingularSylvesterError):
        sylvester_inverse(SylvesterCoefficients(0, 1, 0, 0, 0))


def test_expm_against_scipy():
    rng = np.random.default_rng(1)
    for scale in (1e-3, 0.1, 2.0):
        A = scale * (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
        assert np.max(np.abs(expm_small(A) - expm(A))) <= 1e-12 * max(1, np.abs(expm(A)).max())


def random_quadruple(rng, mu=0.3):
    E = np.array([[rng.normal(), 1j * rng.normal()], [0, rng.normal()]])
    E[1, 0] = np.conj(E[0, 1])
    G = np.array([[1 + rng.uniform(), 1j * rng.normal()], [0, 0.5 + rng.uniform()]])
    G[1, 0] = np.conj(G[0, 1])
    F = 0.01 * np.array([[rng.normal(), 1j * rng.normal()], [1j * rng.normal(), rng.normal()]])
    return ReducedQuadruple.from_blocks(E, F, G, 2.0, mu, 0.01, "test")


def test_homological_against_scipy():
    rng = np.random.default_rng(7)
    for _ in range(20):
        q = random_quadruple(rng)
        X = solve_homological(q)
        ref = solve_sylvester(J2 @ q.E, -J2 @ q.G, -J2 @ q.F)
        assert np.max(np.abs(X - ref)) <= 1e-10
        assert homological_residual(q, X) <= 1e-12
        assert np.all(np.abs(X.imag[[0, 1], [0, 1]]) <= 1e-15)
        assert np.all(np.abs(X.real[[0, 1], [1, 0]]) <= 1e-15)


def test_generator_structure():
    rng = np.random.default_rng(2)
    X = np.array([[rng.normal(), 1j * rng.normal()], [1j * rng.normal(), rng.normal()]])
    S = generator(X)
    E = expm(S)
    # Hamiltonian generator: exp(S) is symplectic
    assert np.max(np.abs(E.conj().T @ J4 @ E - J4)) <= 1e-12


def test_step_with_zero_generator():
    q = random_quadruple(np.random.default_rng(4))
    assert np.max(np.abs(decouple_step(q, np.zeros((2, 2))).B4 - q.B4)) <= 1e-15


def test_step_reduces_coupling():
    q = random_quadruple(np.random.default_rng(5))
    q2 = decouple_step(q, solve_homological(q))
    assert off_diagonal(q2.L4) < 0.01 * off_diagonal(q.L4)
    assert q2.hermitian_defect() <= 1e-12 and q2.pattern_defect() <= 1e-12
    assert multiset_distance(np.linalg.eigvals(q.L4), np.linalg.eigvals(q2.L4)) <= 1e-12


def test_full_decouple_on_decoupled_input():
    q = random_quadruple(np.random.default_rng(6))
    B = q.B4.copy()
    B[:2, 2:] = 0
    B[2:, :2] = 0
    pair = full_decouple(ReducedQuadruple(B, 2.0, 0.3, 0.01))
    assert pair.iterations == 0
    c = np.sqrt(np.tanh(2.0))
    assert np.allclose(pair.U_block - 1j * c * 0.3 * np.eye(2), (J4 @ B)[:2, :2])


def test_full_decouple_random():
    q = random_quadruple(np.random.default_rng(8))
    pair = full_decouple(q)
    assert pair.off_diagonal_residual <= 1e-12
    ev = np.linalg.eigvals(q.L4) + 1j * np.sqrt(np.tanh(2.0)) * 0.3
    assert multiset_distance(pair.eigenvalues(), ev) <= 1e-11


def test_rescaling_preserves_spectrum():
    q = random_quadruple(np.random.default_rng(9))
    r = singular_rescaling(q, 0.3)
    assert multiset_distance(np.linalg.eigvals(q.L4), np.linalg.eigvals(r.L4)) <= 1e-12
    with pytest.raises(ValueError):
        singular_rescaling(q, 0.0)


@pytest.mark.parametrize("h", [1.0, 2.0])
def test_analytic_pipeline(h):
    d = depth_coefficients(h)
    for eps in (0.01, 0.005):
        mu = eps
        st_ = run_pipeline(analytic_quadruple(h, mu, eps))
        E2 = st_.step.E[0, 0].real + d.e_22 * mu**3 / 8
        assert E2 / (mu * eps**2) == pytest.approx(d.e_WB, rel=0.05)
        assert st_.pair.off_diagonal_residual <= 1e-12


@pytest.mark.parametrize("h", [1.0, 2.0])
def test_numeric_pipeline(reduction, h):
    d = depth_coefficients(h)
    eps = 0.005
    st_ = run_pipeline(reduction(h, eps, eps).quadruple)
    E2 = (st_.step.E[0, 0].real + d.e_22 * eps**3 / 8) / eps**3
    assert E2 == pytest.approx(d.e_WB, rel=0.05)
    assert st_.pair.off_diagonal_residual <= 1e-12
    assert multiset_distance(st_.pair.eigenvalues(), st_.kato.eigenvalues()) <= 1e-12
    # residual coupling after the explicit step is much smaller than before it
    assert off_diagonal(st_.step.L4) <= 1e-3 * off_diagonal(st_.rescaled.L4)
    # the unstable pair is centred at i breve_c mu / 2
    assert np.trace(st_.pair.U_block).imag / eps == pytest.approx(d.breve_c_h, rel=0.05)
    assert abs(np.trace(st_.pair.U_block).real) <= 1e-12
