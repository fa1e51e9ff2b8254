"""Command-line interface surface and output formats."""

import json

import numpy as np
import pytest

import sphereigen.cli as cli
import sphereigen.eigensolver as es
import sphereigen.model_family as mf


def test_family_table_values(tmp_path):
    out = tmp_path / "ft.csv"
    assert cli.main(["family-table", "--R", "0.5", "--out", str(out)]) == 0
    header, row = out.read_text().strip().split("\n")
    assert header.split(",") == list(cli.FAMILY_COLUMNS)
    vals = dict(zip(header.split(","), map(float, row.split(","))))
    m = mf.model(0.5)
    assert vals["r_plus"] == pytest.approx(m.r_plus, rel=1e-15)
    assert vals["alpha"] == pytest.approx(m.alpha, rel=1e-15)
    assert vals["tau_plus"] == pytest.approx(mf.tau_pm(m, "+"), rel=1e-15)


def test_family_table_empty_grid(tmp_path):
    out = tmp_path / "ft.csv"
    assert cli.main(["family-table", "--R", "", "--out", str(out)]) == 0
    assert out.read_text().strip() == ",".join(cli.FAMILY_COLUMNS)


def test_verify_single_suite_report(tmp_path):
    out = tmp_path / "rep.json"
    assert cli.main(["verify", "--suites", "model", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["report"]["passed"] is True
    assert set(doc["report"]["suites"]) == {"model"}
    assert "version" in doc


def test_verify_unknown_suite_fails():
    assert cli.main(["verify", "--suites", "nonsense"]) == 2


def test_solve_outputs(tmp_path):
    m = mf.model(0.25)
    dom = tmp_path / "dom.json"
    dom.write_text(es.rot_annulus(m.r_minus, m.r_plus, (48, 24)).to_json())
    assert cli.main(["solve", "--config", str(dom),
                     "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "summary.json").read_text())
    assert doc["summary"]["lambda"] == pytest.approx(2.0, abs=0.05)
    lines = (tmp_path / "solution.csv").read_text().strip().split("\n")
    assert len(lines) == 1 + 48 * 24


def test_solve_resolution_override(tmp_path):
    m = mf.model(0.25)
    dom = tmp_path / "dom.json"
    dom.write_text(es.rot_annulus(m.r_minus, m.r_plus, (48, 24)).to_json())
    assert cli.main(["solve", "--config", str(dom), "--resolution", "32x16",
                     "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "solution.csv").read_text().strip().split("\n")
    assert len(lines) == 1 + 32 * 16


def test_mesh_from_parameter(tmp_path):
    assert cli.main(["mesh", "--R", "0.3", "--resolution", "48x24",
                     "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "mesh_report.json").read_text())
    assert len(doc["report"]["loops"]) == 2
    assert doc["report"]["flux_imbalance"] < 0.1
    assert (tmp_path / "surface.obj").exists()


def test_mesh_from_field_csv(tmp_path):
    m = mf.model(0.25)
    sol = es.dirichlet_solve(es.rot_annulus(m.r_minus, m.r_plus, (48, 24)))
    csv = tmp_path / "field.csv"
    es.export_solution_csv(sol, str(csv))
    assert cli.main(["mesh", "--config", str(csv),
                     "--out", str(tmp_path)]) == 0
    assert (tmp_path / "surface.obj").exists()


def test_crofton_closed_circle(tmp_path):
    th = np.arange(256) * 2 * np.pi / 256
    path = tmp_path / "circ.csv"
    np.savetxt(path, np.column_stack([np.full(256, 0.4), th]),
               delimiter=",", header="r,theta", comments="")
    out = tmp_path / "cr.json"
    assert cli.main(["crofton", "--config", str(path), "--planes", "20000",
                     "--seed", "1", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    exact = 2 * np.pi * np.sqrt(1 - 0.16)
    assert doc["report"]["crofton_length"] == pytest.approx(exact, rel=0.02)


def test_crofton_rejects_open_curve(tmp_path):
    ts = np.linspace(0.0, np.pi, 100)
    path = tmp_path / "arc.csv"
    np.savetxt(path, np.column_stack([np.full(100, 0.2), ts]),
               delimiter=",", header="r,theta", comments="")
    assert cli.main(["crofton", "--config", str(path)]) == 2
