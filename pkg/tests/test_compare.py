"""Maximum-set classification, pointwise comparison, levels and lengths."""

import dataclasses

import numpy as np
import pytest

import sphereigen.comparison as cp
import sphereigen.model_family as mf
from sphereigen.errors import EmptyLevel, NormalizationMissing
from sphereigen.sphere_core import field_from_function


def test_max_set_curve_component():
    f = mf.sample_field(mf.model(0.4), 201, 32)
    comps = cp.max_set(f)
    assert len(comps) == 1
    assert comps[0].kind == "curve"
    rows = np.any(comps[0].node_mask, axis=1)
    assert np.max(np.abs(f.r_nodes[rows] - 0.4)) < 3 * f.dr


def test_max_set_point_component():
    f = field_from_function(
        lambda r, th: -((r - 0.2) ** 2) - (1 - np.cos(th)) ** 2,
        -0.5, 0.7, 121, 64)
    comps = cp.max_set(f)
    assert any(c.kind == "point" for c in comps)


def test_nwss_branches_and_heights():
    f = mf.sample_field(mf.model(0.5), 513, 8)
    rep = cp.nwss(f)
    assert len(rep.regions) == 2
    lower, upper = rep.regions
    assert lower.branch == "-" and upper.branch == "+"
    assert lower.expected_height == pytest.approx(0.5, abs=1e-3)
    assert upper.expected_height == pytest.approx(0.5, abs=1e-3)
    assert upper.tau > mf.family_constants().tau0 > lower.tau


def test_pseudo_radial_requires_normalization():
    f = mf.sample_field(mf.model(0.3), 65, 8)
    with pytest.raises(NormalizationMissing):
        cp.pseudo_radial(f.scaled(0.5), 0.3, "+")


def test_compare_w_flags_inflated_gradient():
    # inflate the profile near the lower boundary; the gradient square
    # there then exceeds the closed-form profile at equal heights
    m = mf.model(0.3)
    bump = 0.35
    f = field_from_function(
        lambda r, th: mf.xi_value(m, r)
        * (1 + bump * np.exp(-((r - m.r_minus) / 0.2) ** 2)),
        m.r_minus, m.r_plus, 257, 8)
    rep = cp.nwss(f)
    rg = rep.regions[0]
    nf, _ = cp.normalize_field(f, rg.expected_height)
    psi = cp.pseudo_radial(nf, rg.expected_height, rg.branch, rg)
    w = cp.compare_W(nf, psi, rg.expected_height, rg, tol=0.02)
    assert not w.equality_case
    assert len(w.violation_nodes) > 0


def test_p_function_positive_on_models():
    for R in (0.0, 0.6):
        f = mf.sample_field(mf.model(R), 257, 16)
        p_field, min_lap = cp.p_function_check(f)
        assert min_lap > 0
        m = mf.model(R)
        # closed-form floor of the P-Laplacian over the annulus
        assert np.min(p_field.values) > 0.9 * m.alpha**2


def test_level_extract_circles_and_lengths():
    m = mf.model(0.5)
    f = mf.sample_field(m, 513, 64)
    lv = cp.level_extract(f, 0.5 * m.xi_max)
    assert len(lv.curves) == 2
    for pts, length in zip(lv.curves, lv.lengths):
        rmid = float(np.mean(pts[:, 0]))
        assert length == pytest.approx(2 * np.pi * np.sqrt(1 - rmid**2),
                                       rel=1e-3)
    assert lv.metric_length == pytest.approx(sum(lv.lengths))
    with pytest.raises(EmptyLevel):
        cp.level_extract(f, 2.0 * m.xi_max)


def test_zero_level_reproduces_boundary():
    m = mf.model(0.25)
    f = mf.sample_field(m, 257, 32)
    lv = cp.level_extract(f, 0.0)
    radii = sorted(float(np.mean(pts[:, 0])) for pts in lv.curves)
    assert radii[0] == pytest.approx(m.r_minus, abs=1e-10)
    assert radii[-1] == pytest.approx(m.r_plus, abs=1e-10)


def test_energy_profile_skips_critical_band():
    f = mf.sample_field(mf.model(0.0), 257, 16)
    xi_max = float(np.max(f.values))
    ts, es_, skipped = cp.energy_profile(
        f, [0.2 * xi_max, 0.999999 * xi_max])
    assert ts.size == 1
    assert len(skipped) == 1


def test_curvature_report_model_saturates():
    f = mf.sample_field(mf.model(0.5), 513, 16)
    rep = cp.curvature_bound_report(f)
    assert rep.ordering_ok
    for rg in rep.regions:
        assert rg.boundary_ok and rg.top_ok
        assert abs(rg.kappa_boundary - rg.boundary_bound) < 30 * f.dr


def test_top_curve_length_matches_parallel():
    for R in (0.0, 0.5):
        f = mf.sample_field(mf.model(R), 513, 64)
        length, pts = cp.top_curve_length(f)
        assert length == pytest.approx(2 * np.pi * np.sqrt(1 - R * R),
                                       rel=1e-3)
        assert np.max(np.abs(pts[:, 0] - R)) < 1e-3


def test_length_bound_on_model():
    R = 0.4
    m = mf.model(R)
    f = mf.sample_field(m, 257, 64)
    rep = cp.nwss(f)
    for rg in rep.regions:
        rgx = dataclasses.replace(rg, expected_height=R)
        lb = cp.length_bound_check(f, rgx, rep)
        assert lb.holds
        assert lb.lhs == pytest.approx(lb.rhs, rel=1e-3)


def test_fibonacci_directions_deterministic_unit():
    a = cp.fibonacci_directions(500, seed=3)
    b = cp.fibonacci_directions(500, seed=3)
    c = cp.fibonacci_directions(500, seed=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-12)


def test_crofton_circle_length():
    th = np.arange(360) * 2 * np.pi / 360
    for h in (0.0, 0.6):
        circle = np.column_stack([np.full(360, h), th])
        L = cp.crofton_length(circle, 50000, seed=0)
        assert L == pytest.approx(2 * np.pi * np.sqrt(1 - h * h), rel=0.02)


def test_csv_helpers_shape():
    ts, es_ = np.array([0.1, 0.2]), np.array([6.28, 6.27])
    text = cp.energy_csv(ts, es_)
    assert text.startswith("t,E\n")
    assert len(text.strip().split("\n")) == 3
