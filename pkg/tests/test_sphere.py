"""Coordinate chart, metric, jets and level curvature."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphereigen.errors import DegenerateGradient, StencilUnavailable
from sphereigen.sphere_core import (
    BOUNDARY,
    INTERIOR,
    ScalarField,
    SphericalPoint,
    embed,
    embed_rt,
    field_from_function,
    frame_vectors,
    geodesic_distance,
    jet,
    jet_grid,
    level_curvature,
    metric_coeffs,
    normalize_theta,
)

heights = st.floats(-0.99, 0.99)
angles = st.floats(-50.0, 50.0, allow_nan=False)


@given(heights, angles)
def test_embedding_lands_on_unit_sphere(r, theta):
    p = embed_rt(r, theta)
    assert np.linalg.norm(p) == pytest.approx(1.0, abs=1e-12)
    assert p[2] == pytest.approx(r, abs=1e-12)


@given(angles)
def test_normalize_theta_range(theta):
    t = normalize_theta(theta)
    assert 0.0 <= t < 2 * np.pi
    assert np.cos(t) == pytest.approx(np.cos(theta), abs=1e-9)


def test_spherical_point_validates_height():
    with pytest.raises(ValueError):
        SphericalPoint(1.5, 0.0)
    p = SphericalPoint(0.3, -np.pi)
    assert 0.0 <= p.theta < 2 * np.pi
    assert np.allclose(embed(p), embed_rt(0.3, -np.pi))


@given(heights)
def test_metric_product_is_one(r):
    mc = metric_coeffs(r)
    assert mc.g_rr * mc.g_tt == pytest.approx(1.0, rel=1e-12)


@given(heights, angles)
def test_frame_is_orthonormal_and_tangent(r, theta):
    n_hat, t_hat = frame_vectors(r, theta)
    p = embed_rt(r, theta)
    for v in (n_hat, t_hat):
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        assert np.dot(v, p) == pytest.approx(0.0, abs=1e-12)
    assert np.dot(n_hat, t_hat) == pytest.approx(0.0, abs=1e-12)


def test_geodesic_distance_poles():
    n, s = SphericalPoint(1.0, 0.0), SphericalPoint(-1.0, 0.0)
    assert geodesic_distance(n, s) == pytest.approx(np.pi)
    assert geodesic_distance(n, n) == 0.0


def _quadratic_field(n_r=401, n_t=16):
    return field_from_function(lambda r, th: r * r, -0.6, 0.6, n_r, n_t)


def test_jet_matches_closed_form():
    f = _quadratic_field()
    i = f.r_nodes.size // 2 + 37
    r = f.r_nodes[i]
    j = jet(f, i, 3)
    one = 1.0 - r * r
    assert j.value == pytest.approx(r * r, abs=1e-12)
    assert j.grad_n == pytest.approx(np.sqrt(one) * 2 * r, abs=1e-6)
    assert j.grad_t == pytest.approx(0.0, abs=1e-10)
    assert j.hess_nn == pytest.approx(2 * one - 2 * r * r, abs=1e-5)
    assert j.hess_tt == pytest.approx(-2 * r * r, abs=1e-5)
    assert j.laplacian == pytest.approx(2 - 6 * r * r, abs=1e-5)


def test_boundary_rows_need_one_sided_stencils():
    f = _quadratic_field(n_r=41)
    with pytest.raises(StencilUnavailable):
        jet(f, 0, 0)
    j = jet(f, 0, 0, one_sided=True)
    r = f.r_nodes[0]
    assert j.grad_n == pytest.approx(np.sqrt(1 - r * r) * 2 * r, abs=1e-4)
    with pytest.raises(StencilUnavailable):
        jet(f, 999, 0)


def test_level_curvature_of_parallels():
    # the parallels are the level sets of the height function; curvature
    # signed with respect to the upward gradient is r / sqrt(1 - r^2)
    f = field_from_function(lambda r, th: r, -0.5, 0.5, 201, 8)
    for i in (40, 100, 160):
        r = f.r_nodes[i]
        kap = level_curvature(jet(f, i, 0))
        assert kap == pytest.approx(r / np.sqrt(1 - r * r), abs=1e-5)


def test_level_curvature_rejects_flat_gradient():
    f = field_from_function(lambda r, th: 1.0, -0.5, 0.5, 31, 8)
    with pytest.raises(DegenerateGradient):
        level_curvature(jet(f, 15, 0))


def test_jet_grid_gradient_norm_field():
    f = _quadratic_field(n_r=201)
    g = jet_grid(f, one_sided=True)
    r = f.r_nodes[:, None]
    exact = np.sqrt(1 - r * r) * np.abs(2 * r)
    assert np.max(np.abs(g["grad_norm"] - exact)) < 1e-4


def test_scalar_field_scaled_and_masks():
    f = _quadratic_field(n_r=31)
    g = f.scaled(2.0)
    assert np.allclose(g.values, 2.0 * f.values)
    assert np.all(f.domain_mask[0] == BOUNDARY)
    assert np.all(f.domain_mask[1:-1] == INTERIOR)
    assert f.dr == pytest.approx(1.2 / 30)
