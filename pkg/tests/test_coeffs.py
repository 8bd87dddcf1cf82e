import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bfwaves.coeffs import (
    DomainError, RegimeError, critical_depth, depth_coefficients, whitham_benjamin,
)

# 40-digit evaluations: c_h = sqrt(tanh h), e_12 = 2 w'(1), e_22 = -4 w''(1)
# for the flat dispersion relation w(k) = sqrt(k tanh(hk)), and the root of e_WB.
ORACLE = {
    1.0: dict(c_h=0.87269362089782969154, e_12=1.3539327769511938337, e_22=1.6416260880550671046),
    2.0: dict(c_h=0.98184906175838294374, e_12=1.1257628823340968156, e_22=1.8250106229400418884),
}
H_WB = 1.362782756726420064975788


@pytest.mark.parametrize("h", [1.0, 2.0])
def test_coefficients_match_dispersion_derivatives(h):
    d = depth_coefficients(h)
    for name, value in ORACLE[h].items():
        assert getattr(d, name) == pytest.approx(value, rel=1e-14)


def test_whitham_benjamin_sign_on_either_side():
    assert depth_coefficients(1.0).e_WB < 0
    assert depth_coefficients(2.0).e_WB > 0
    assert depth_coefficients(1.0).e_h is None
    assert depth_coefficients(2.0).e_h == pytest.approx(np.sqrt(8 * 0.43169744446468236393 / ORACLE[2.0]["e_22"]))


def test_deep_water_limits():
    d = depth_coefficients(20.0)
    assert abs(d.e_22 - 1) < 1e-4 and abs(d.e_12 - 1) < 1e-4


def test_depth_outside_range_rejected():
    for h in (0.01, 0.05, 50.0, -1.0, float("nan")):
        with pytest.raises(DomainError):
            depth_coefficients(h)


def test_critical_depth_default_bracket():
    h = critical_depth()
    assert abs(h - 1.363) <= 1e-3
    assert h == pytest.approx(H_WB, abs=1e-11)


def test_critical_depth_bracket_independent():
    assert critical_depth((1.3, 1.4), 1e-12) == pytest.approx(critical_depth((1.0, 2.0), 1e-10), abs=1e-10)


def test_critical_depth_needs_sign_change():
    with pytest.raises(RegimeError):
        critical_depth((2.0, 3.0))


def test_sign_structure_around_root():
    h = critical_depth()
    assert np.all(whitham_benjamin(np.linspace(0.2, h - 0.01, 300)) < 0)
    assert np.all(whitham_benjamin(np.linspace(h + 0.01, 30, 300)) > 0)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=np.log(0.1), max_value=np.log(30.0)))
def test_positivity_and_identity(logh):
    d = depth_coefficients(np.exp(logh))
    assert d.e_22 > 0 and d.D_h > 0 and d.e_11 > 0 and d.breve_c_h > 0
    assert d.e_12 >= d.c_h
    assert abs(d.e_WB - (d.e_11 + d.tilde_e11)) <= 1e-12 * max(1, abs(d.e_WB))
    # e_22 has a second closed form through b_h and zeta_h
    assert d.e_22 == pytest.approx(2 * (d.b_bold_h - 4 * d.zeta_h), rel=1e-12, abs=1e-12)
