"""Command-line entry point.

Subcommands: family-table, verify, solve, mesh, crofton.  All outputs
are deterministic for fixed inputs: CSV floats are written with 17
significant digits, JSON documents have sorted keys and record the
package version together with the resolved configuration.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from . import catenoid as ct
from . import comparison as cp
from . import eigensolver as es
from . import model_family as mf
from . import verification as vf
from .errors import OpenCurve, SphereigenError

FAMILY_COLUMNS = ("R", "r_minus", "r_plus", "alpha", "omega", "xi_max",
                  "tau_minus", "tau_plus", "boundary_gradient_ratio")


def _parse_resolution(text):
    nr, nt = text.lower().split("x")
    return int(nr), int(nt)


def _write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _stamp(config):
    return {"version": __version__, "config": config}


def family_table_csv(r_grid):
    """CSV rows of family data for each R in the grid; header always present."""
    lines = [",".join(FAMILY_COLUMNS)]
    for R in r_grid:
        m = mf.model(float(R))
        row = (m.R, m.r_minus, m.r_plus, m.alpha, m.omega, m.xi_max,
               mf.tau_pm(m, "-"), mf.tau_pm(m, "+"),
               mf.boundary_gradient_ratio(m))
        lines.append(",".join(f"{x:.17g}" for x in row))
    return "\n".join(lines) + "\n"


def cmd_family_table(args):
    if args.R is not None:
        grid = [float(tok) for tok in args.R.split(",") if tok]
    else:
        grid = np.linspace(0.0, 0.9, args.count)
    with open(args.out, "w") as fh:
        fh.write(family_table_csv(grid))
    print(f"wrote {args.out} ({len(grid)} rows)")
    return 0


def cmd_verify(args):
    suites = [s for s in args.suites.split(",") if s] if args.suites else None
    report = vf.verify(suites)
    doc = _stamp({"suites": suites or list(vf.SUITES)})
    doc["report"] = report
    if args.out:
        _write_json(args.out, doc)
    for name, sd in report["suites"].items():
        print(f"{name}: {'pass' if sd['passed'] else 'FAIL'}")
        for c in sd["checks"]:
            if not c["passed"]:
                print(f"  FAIL {c['name']} (value {c['value']})")
    return 0 if report["passed"] else 1


def cmd_solve(args):
    with open(args.config) as fh:
        spec = es.DomainSpec.from_json(fh.read())
    if args.resolution:
        import dataclasses
        spec = dataclasses.replace(spec,
                                   resolution=_parse_resolution(args.resolution))
    sol = es.dirichlet_solve(spec)
    es.export_solution_csv(sol, args.out + "/solution.csv")
    doc = _stamp(json.loads(spec.to_json()))
    doc["summary"] = es.solution_summary(sol)
    _write_json(args.out + "/summary.json", doc)
    print(f"lambda = {sol.lam:.12g}; wrote {args.out}/solution.csv")
    return 0


def _field_from_csv(path):
    from .sphere_core import ScalarField, INTERIOR, BOUNDARY
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    rs = np.unique(data[:, 0])
    ths = np.unique(data[:, 1])
    vals = np.full((rs.size, ths.size), np.nan)
    ri = np.searchsorted(rs, data[:, 0])
    tj = np.searchsorted(ths, data[:, 1])
    vals[ri, tj] = data[:, 2]
    mask = np.full(vals.shape, INTERIOR, dtype=np.int8)
    mask[0, :] = BOUNDARY
    mask[-1, :] = BOUNDARY
    return ScalarField(rs, ths, vals, mask)


def cmd_mesh(args):
    if args.config:
        field = _field_from_csv(args.config)
        mesh = ct.support_map(field)
        source = {"field_csv": args.config}
    else:
        res = _parse_resolution(args.resolution) if args.resolution else (128, 64)
        mesh = ct.model_catenoid(args.R, res)
        source = {"R": args.R, "resolution": list(res)}
    ct.export_obj(mesh, args.out + "/surface.obj")
    br = ct.boundary_report(mesh)
    hmax, hl2 = ct.mean_curvature_residual(mesh)
    doc = _stamp(source)
    doc["report"] = {
        "mean_curvature_max": hmax,
        "mean_curvature_l2": hl2,
        "flux_imbalance": br.flux_imbalance,
        "loops": [
            {"sphere_radius": lp.sphere_radius,
             "radius_deviation": lp.radius_deviation,
             "orthogonality_deviation": lp.orthogonality_deviation,
             "flux_vector": [float(x) for x in lp.flux_vector]}
            for lp in br.loops
        ],
    }
    _write_json(args.out + "/mesh_report.json", doc)
    print(f"wrote {args.out}/surface.obj and mesh_report.json")
    return 0


def cmd_crofton(args):
    data = np.loadtxt(args.config, delimiter=",", skiprows=1)
    curve = data[:, :2]
    # vertices of a closed polyline, first vertex not repeated; reject
    # curves whose closing edge dwarfs the typical edge length
    from .sphere_core import embed_rt
    pts = embed_rt(curve[:, 0], curve[:, 1])
    edges = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    closing = float(np.linalg.norm(pts[0] - pts[-1]))
    if closing > 10.0 * max(float(np.median(edges)), 1e-12):
        raise OpenCurve(
            f"closing gap {closing:.3g} vs median edge "
            f"{float(np.median(edges)):.3g}; curve is not closed")
    est = cp.crofton_length(curve, args.planes, seed=args.seed)
    exact = cp._metric_polyline_length(np.vstack([curve, curve[:1]]))
    doc = _stamp({"curve_csv": args.config, "planes": args.planes,
                  "seed": args.seed})
    doc["report"] = {"crofton_length": est, "polyline_length": exact,
                     "relative_gap": abs(est - exact) / exact}
    if args.out:
        _write_json(args.out, doc)
    print(f"crofton length {est:.12g} (polyline {exact:.12g})")
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="sphereigen")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    ft = sub.add_parser("family-table", help="CSV table of the model family")
    ft.add_argument("--R", help="comma-separated list of R values")
    ft.add_argument("--count", type=int, default=19,
                    help="grid size for the default R grid over [0, 0.9]")
    ft.add_argument("--out", required=True, help="output CSV path")
    ft.set_defaults(fn=cmd_family_table)

    vp = sub.add_parser("verify", help="run named verification suites")
    vp.add_argument("--suites", help=f"comma list from {', '.join(vf.SUITES)}")
    vp.add_argument("--out", help="optional JSON report path")
    vp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("solve", help="Dirichlet eigensolve on a domain")
    sp.add_argument("--config", required=True, help="domain JSON path")
    sp.add_argument("--resolution", help="override, e.g. 256x128")
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(fn=cmd_solve)

    mp = sub.add_parser("mesh", help="catenoid mesh via the support map")
    mp.add_argument("--R", type=float, default=0.5,
                    help="model parameter for the exact catenoid")
    mp.add_argument("--config", help="field CSV (r,theta,value) to map instead")
    mp.add_argument("--resolution", help="grid, e.g. 128x64")
    mp.add_argument("--out", required=True, help="output directory")
    mp.set_defaults(fn=cmd_mesh)

    cr = sub.add_parser("crofton", help="integral-geometry length of a curve")
    cr.add_argument("--config", required=True, help="curve CSV (r,theta)")
    cr.add_argument("--planes", type=int, default=100000)
    cr.add_argument("--seed", type=int, default=0)
    cr.add_argument("--out", help="optional JSON report path")
    cr.set_defaults(fn=cmd_crofton)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SphereigenError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
