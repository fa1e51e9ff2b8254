"""Shooting and finite-difference eigensolvers."""

import numpy as np
import pytest

import sphereigen.eigensolver as es
import sphereigen.model_family as mf
from sphereigen.errors import ParameterOutOfRange


def test_domain_spec_json_round_trip():
    spec = es.perturbed_annulus(-0.7, 0.8, (((2, 0.03),), ((3, 0.02),)),
                                (48, 24))
    clone = es.DomainSpec.from_json(spec.to_json())
    assert clone == spec
    assert clone.rho_plus(0.0) == pytest.approx(0.82)
    assert clone.rho_minus(np.pi / 2) == pytest.approx(-0.7 - 0.03)


def test_domain_spec_validation():
    with pytest.raises(ParameterOutOfRange):
        es.DomainSpec(kind="torus")
    with pytest.raises(ParameterOutOfRange):
        es.rot_annulus(0.5, 0.3)
    with pytest.raises(ParameterOutOfRange):
        # amplitude pushes the upper boundary through the pole
        es.perturbed_annulus(-0.5, 0.95, ((), ((1, 0.1),)))


def test_shooting_symmetric_profile():
    fc = mf.family_constants()
    rb, (rs, xs) = es.shoot_next_zero(-fc.r_bar)
    assert rb == pytest.approx(fc.r_bar, abs=1e-9)
    assert np.all(xs[1:-1] > 0)
    assert rs[0] == pytest.approx(-fc.r_bar)


def test_shooting_matches_family_roots():
    for R in (0.2, 0.6):
        m = mf.model(R)
        rb = es.find_rb_for_eigenvalue2(m.r_minus)
        assert rb == pytest.approx(m.r_plus, abs=1e-9)


def test_annulus_eigenvalue_and_eigenfunction():
    m = mf.model(0.25)
    sol = es.dirichlet_solve(es.rot_annulus(m.r_minus, m.r_plus, (128, 32)))
    assert sol.lam == pytest.approx(2.0, abs=5e-3)
    f = sol.field
    exact = mf.xi_value(m, f.r_nodes)[:, None]
    num = f.values * (m.xi_max / np.max(f.values))
    assert np.max(np.abs(num - exact)) < 5e-3 * m.xi_max
    # boundary gradient ratio of the two components
    comps = es.overdetermined_residual(sol)
    assert len(comps) == 2
    ratio = max(c[0] for c in comps) / min(c[0] for c in comps)
    bgr = mf.boundary_gradient_ratio(m)
    assert ratio == pytest.approx(max(bgr, 1.0 / bgr), rel=2e-2)
    for _, dev, rel in comps:
        assert rel < 1e-3


def test_disk_eigenvalue():
    sol = es.dirichlet_solve(es.disk((128, 8)))
    assert sol.lam == pytest.approx(2.0, abs=1e-4)
    assert len(sol.boundary_grad) == 1


def test_perturbed_annulus_breaks_constancy():
    m = mf.model(0.0)
    sol = es.dirichlet_solve(es.perturbed_annulus(
        m.r_minus, m.r_plus, (((2, 0.05),), ((2, 0.05),)), (96, 48)))
    rels = [rel for _, _, rel in es.overdetermined_residual(sol)]
    assert max(rels) > 1e-2


def test_sphere_cluster():
    lams = es.sphere_cluster_near_two(96, 48)
    close = np.sort(np.abs(np.asarray(lams) - 2.0))
    assert np.all(close[:3] < 0.05)


def test_solution_csv_and_summary(tmp_path):
    m = mf.model(0.0)
    sol = es.dirichlet_solve(es.rot_annulus(m.r_minus, m.r_plus, (32, 16)))
    path = tmp_path / "sol.csv"
    es.export_solution_csv(sol, str(path))
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "r,theta,value"
    assert len(lines) == 1 + 32 * 16
    doc = es.solution_summary(sol)
    assert doc["lambda"] == pytest.approx(2.0, abs=0.1)
    assert len(doc["components"]) == 2
