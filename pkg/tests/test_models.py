"""Closed-form family of rotationally symmetric solutions."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import sphereigen.model_family as mf
from sphereigen.errors import ValueOutOfRange

params = st.floats(0.0, 0.9)


def test_critical_constants_frozen_values():
    fc = mf.family_constants()
    assert fc.r_bar == pytest.approx(0.8335565596009646, abs=1e-15)
    assert fc.tau0 == pytest.approx(2.171622980887501, abs=1e-14)


@given(params)
@settings(max_examples=50, deadline=None)
def test_model_identities(R):
    m = mf.model(R)
    assert -1.0 < m.r_minus < 0.0 < m.r_plus < 1.0
    assert m.r_minus < R < m.r_plus or R == 0.0
    assert m.omega == pytest.approx(np.arctanh(R) + R / (1 - R * R), rel=1e-12)
    assert m.alpha == pytest.approx(m.r_plus * np.sqrt(1 - m.r_plus**2),
                                    rel=1e-10)
    assert m.xi_max == pytest.approx(m.alpha / (1 - R * R), rel=1e-12)
    # zeros of the profile and the normalized gradient there
    assert mf.xi_value(m, m.r_plus) == pytest.approx(0.0, abs=1e-12)
    assert mf.xi_value(m, m.r_minus) == pytest.approx(0.0, abs=1e-12)
    assert mf.grad_norm(m, m.r_plus) == pytest.approx(1.0, abs=1e-10)
    assert mf.xi_value(m, R) == pytest.approx(m.xi_max, rel=1e-12)


def test_symmetric_case_mirrors():
    m = mf.model(0.0)
    assert m.r_plus == pytest.approx(-m.r_minus, abs=1e-14)
    assert m.omega == 0.0
    assert mf.boundary_gradient_ratio(m) == pytest.approx(1.0, rel=1e-12)


@given(params)
@settings(max_examples=30, deadline=None)
def test_tau_inversion_round_trip(R):
    m = mf.model(R)
    for branch in ("+", "-"):
        tau = mf.tau_pm(m, branch)
        if branch == "-" and tau <= 1.0 + 1e-6:
            return
        assert mf.invert_tau(tau) == pytest.approx(R, abs=1e-9)


def test_tau_ordering_and_critical_value():
    fc = mf.family_constants()
    m = mf.model(0.0)
    assert mf.tau_pm(m, "+") == pytest.approx(fc.tau0, rel=1e-12)
    assert mf.tau_pm(m, "-") == pytest.approx(fc.tau0, rel=1e-12)
    m = mf.model(0.5)
    assert mf.tau_pm(m, "+") > fc.tau0 > mf.tau_pm(m, "-") > 1.0


def test_invert_tau_edges():
    assert mf.invert_tau(0.5) == 1.0
    assert mf.invert_tau(1.0) == 1.0
    with pytest.raises(ValueOutOfRange):
        mf.invert_tau(-0.1)
    with pytest.raises(ValueOutOfRange):
        mf.invert_tau(1e9)


@given(params, st.floats(0.01, 0.99))
@settings(max_examples=30, deadline=None)
def test_profile_inversion_round_trip(R, frac):
    m = mf.model(R)
    target = frac * m.xi_max
    for branch in ("+", "-"):
        chi = mf.chi_branch(m, target, branch)
        assert mf.xi_value(m, chi) == pytest.approx(target, abs=1e-11)
        if branch == "+":
            assert R <= chi <= m.r_plus
        else:
            assert m.r_minus <= chi <= R


@given(params)
@settings(max_examples=30, deadline=None)
def test_gradient_square_profile(R):
    m = mf.model(R)
    rs = np.linspace(m.r_minus + 0.01, m.r_plus - 0.01, 23)
    w = mf.W_model(m, rs)
    assert np.allclose(w, (1 - rs**2) * mf.xi_dr(m, rs) ** 2, rtol=1e-10)
    assert np.all(w >= 0)


def test_zero_derivatives_positive_and_consistent():
    for R in (0.1, 0.4, 0.7):
        m = mf.model(R)
        assert mf.dr_dR(m, "+") > 0
        assert mf.dr_dR(m, "-") > 0


def test_sample_field_shape_and_boundary_zeros():
    m = mf.model(0.3)
    f = mf.sample_field(m, 65, 12)
    assert f.shape == (65, 12)
    assert np.max(np.abs(f.values[0])) < 1e-13
    assert np.max(np.abs(f.values[-1])) < 1e-13
    assert np.max(f.values) == pytest.approx(m.xi_max, rel=1e-3)
