"""Catenoid meshes, support map and discrete validators."""

import numpy as np
import pytest

import sphereigen.catenoid as ct
import sphereigen.model_family as mf


def test_model_catenoid_boundary_spheres():
    m = mf.model(0.3)
    mesh = ct.model_catenoid(0.3, (64, 32))
    br = ct.boundary_report(mesh)
    radii = sorted(lp.sphere_radius for lp in br.loops)
    lower = m.alpha / (abs(m.r_minus) * np.sqrt(1 - m.r_minus**2))
    assert radii[1] == pytest.approx(1.0, abs=1e-12)
    assert radii[0] == pytest.approx(lower, abs=1e-12)
    for lp in br.loops:
        assert lp.radius_deviation < 1e-12
        assert lp.orthogonality_deviation < 1e-10


def test_flux_vectors_balance():
    mesh = ct.model_catenoid(0.5, (128, 64))
    br = ct.boundary_report(mesh)
    f1, f2 = (np.asarray(lp.flux_vector) for lp in br.loops)
    # both fluxes are vertical and opposite for a minimal surface
    assert np.linalg.norm(f1[:2]) < 1e-10
    assert np.linalg.norm(f1 + f2) < mesh.mean_edge_length


def test_mean_curvature_residual_decays():
    res = [ct.mean_curvature_residual(ct.model_catenoid(0.25, n))[1]
           for n in ((33, 16), (65, 32))]
    assert res[1] < 0.6 * res[0]


def test_support_map_reproduces_catenoid():
    R = 0.25
    f = mf.sample_field(mf.model(R), 129, 32)
    sm = ct.support_map(f)
    mc = ct.model_catenoid(R, (129, 32))
    mirrored = mc.vertices.copy()
    mirrored[:, 2] *= -1.0
    assert np.max(np.linalg.norm(sm.vertices - mirrored, axis=1)) < 2e-2
    assert sm.grid_shape == mc.grid_shape
    assert len(sm.boundary_loops) == 2


def test_gauss_and_graph_verdicts():
    mesh = ct.model_catenoid(0.5, (96, 48))
    gg = ct.gauss_and_graph_checks(mesh, n_rays=1500)
    assert gg.gauss_loops_disjoint
    assert gg.min_gauss_distance > 0.5
    assert gg.radial_graph
    assert gg.max_ray_hits == 1
    assert gg.support_min_interior > 0


def test_support_critical_set_is_a_circle_on_a_sphere():
    mesh = ct.model_catenoid(0.25, (96, 48))
    cs = ct.support_critical_set(mesh)
    assert cs.coincide
    assert cs.u_critical.size > 0
    m = mf.model(0.25)
    assert cs.sphere_radius == pytest.approx(m.xi_max, abs=1e-2)
    assert cs.circle_residual < 5e-2


def test_neck_sits_on_the_equator_for_symmetric_parameter():
    mesh = ct.model_catenoid(0.0, (96, 48))
    cs = ct.support_critical_set(mesh)
    assert cs.circle_z == pytest.approx(0.0, abs=1e-10)


def test_export_obj_format(tmp_path):
    mesh = ct.model_catenoid(0.3, (17, 8))
    path = tmp_path / "cat.obj"
    ct.export_obj(mesh, str(path))
    lines = path.read_text().strip().split("\n")
    n_v = sum(1 for ln in lines if ln.startswith("v "))
    n_vn = sum(1 for ln in lines if ln.startswith("vn "))
    n_f = sum(1 for ln in lines if ln.startswith("f "))
    n_l = sum(1 for ln in lines if ln.startswith("l "))
    assert n_v == mesh.vertices.shape[0] == n_vn
    assert n_f == mesh.triangles.shape[0]
    assert n_l == len(mesh.boundary_loops)
    # faces reference valid 1-based vertex indices
    for ln in lines:
        if ln.startswith("f "):
            idx = [int(tok.split("//")[0]) for tok in ln.split()[1:]]
            assert all(1 <= k <= n_v for k in idx)
            break
