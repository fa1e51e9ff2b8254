"""Numerical solvers for  Delta xi + 2 xi = 0 on spherical domains.

Two independent routes to the same solutions: a 1D shooting integrator
for rotationally symmetric profiles, and a 2D sparse Dirichlet
eigensolver on annuli (possibly with Fourier-perturbed boundaries) and
hemispherical disks.  Perturbed annuli are handled by mapping
(s, theta) in [0,1] x [0,2pi) to r = (1-s)*rho_minus(theta) +
s*rho_plus(theta), so boundaries become coordinate lines and the
transformed operator keeps a symmetric second-order discretization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.optimize import brentq
from scipy.sparse.linalg import eigsh

from .errors import (
    DegenerateNearTwo,
    EigenNotConverged,
    NoZeroBeforePole,
    ParameterOutOfRange,
)
from .sphere_core import BOUNDARY, INTERIOR, ScalarField

SOLVER_TOL = 1e-10
CLUSTER_TOL = 1e-6 * 2.0
SHOOT_STOP = 1.0 - 1e-6


@dataclass(frozen=True)
class DomainSpec:
    """Description of a computational domain on the sphere.

    kind is one of 'rot_annulus', 'perturbed_annulus', 'disk'.  For the
    annulus kinds, r_lower/r_upper give the (mean) boundary heights; the
    perturbed kind additionally carries boundary_fourier, a pair of lists
    of (mode, amplitude) cosine perturbations, one list per boundary.
    """

    kind: str
    r_lower: float = None
    r_upper: float = None
    boundary_fourier: tuple = ((), ())
    resolution: tuple = (64, 32)

    def __post_init__(self):
        if self.kind not in ("rot_annulus", "perturbed_annulus", "disk"):
            raise ParameterOutOfRange(f"unknown domain kind {self.kind!r}")
        if self.kind != "disk":
            if not -1.0 < self.r_lower < self.r_upper < 1.0:
                raise ParameterOutOfRange(
                    f"need -1 < r_lower < r_upper < 1, got "
                    f"({self.r_lower}, {self.r_upper})")
        bf = tuple(tuple((int(m), float(a)) for m, a in comp)
                   for comp in self.boundary_fourier)
        object.__setattr__(self, "boundary_fourier", bf)
        object.__setattr__(self, "resolution",
                           (int(self.resolution[0]), int(self.resolution[1])))
        if self.kind == "perturbed_annulus":
            th = np.linspace(0.0, 2.0 * np.pi, 720, endpoint=False)
            lo, hi = self.rho_minus(th), self.rho_plus(th)
            if np.any(hi - lo <= 0) or np.min(lo) <= -1.0 or np.max(hi) >= 1.0:
                raise ParameterOutOfRange(
                    "perturbation amplitudes break boundary ordering")

    def rho_minus(self, theta):
        return self._rho(theta, self.r_lower, self.boundary_fourier[0])

    def rho_plus(self, theta):
        return self._rho(theta, self.r_upper, self.boundary_fourier[1])

    @staticmethod
    def _rho(theta, base, fourier):
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, float(base))
        for mode, amp in fourier:
            out = out + amp * np.cos(mode * theta)
        return out

    def _rho_prime(self, theta, which):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape)
        for mode, amp in self.boundary_fourier[which]:
            out = out - amp * mode * np.sin(mode * theta)
        return out

    def to_json(self):
        doc = {
            "kind": self.kind,
            "r_lower": self.r_lower,
            "r_upper": self.r_upper,
            "boundary_fourier": [list(map(list, c)) for c in self.boundary_fourier],
            "resolution": list(self.resolution),
        }
        return json.dumps(doc, sort_keys=True)

    @staticmethod
    def from_json(text):
        doc = json.loads(text)
        return DomainSpec(
            kind=doc["kind"],
            r_lower=doc.get("r_lower"),
            r_upper=doc.get("r_upper"),
            boundary_fourier=tuple(
                tuple(tuple(p) for p in c)
                for c in doc.get("boundary_fourier", [[], []])),
            resolution=tuple(doc.get("resolution", (64, 32))),
        )


def rot_annulus(r_lower, r_upper, resolution=(64, 32)):
    return DomainSpec("rot_annulus", r_lower, r_upper, resolution=resolution)


def perturbed_annulus(r_lower, r_upper, boundary_fourier, resolution=(64, 32)):
    return DomainSpec("perturbed_annulus", r_lower, r_upper,
                      boundary_fourier=boundary_fourier, resolution=resolution)


def disk(resolution=(64, 8)):
    """Hemispherical cap r in (0, 1); Dirichlet boundary at the equator."""
    return DomainSpec("disk", resolution=resolution)


@dataclass(frozen=True)
class EigenSolution:
    """Eigenpair nearest eigenvalue 2 with boundary gradient samples."""

    lam: float
    field: ScalarField
    boundary_grad: list
    residual_l2: float
    spec: DomainSpec = None


# ---------------------------------------------------------------------------
# 1D shooting

def _ode(r, y):
    xi, v = y
    return [v, (2.0 * r * v - 2.0 * xi) / (1.0 - r * r)]


def shoot_next_zero(r_a, n_samples=2001):
    """Integrate the profile ODE from a zero at r_a to its next zero.

    Starts with xi(r_a) = 0, xi'(r_a) = 1 and returns (r_b, (r, xi))
    where r_b is the first zero above r_a, located by the integrator's
    event root-polishing, and the profile is densely sampled on [r_a, r_b].
    """
    if not -1.0 < r_a < 1.0:
        raise ParameterOutOfRange(f"start height {r_a} outside (-1, 1)")

    def hit_zero(r, y):
        return y[0]

    hit_zero.terminal = True
    hit_zero.direction = -1

    sol = solve_ivp(_ode, (r_a, SHOOT_STOP), [0.0, 1.0], method="RK45",
                    rtol=1e-10, atol=1e-12, events=hit_zero, dense_output=True)
    if not sol.t_events[0].size:
        raise NoZeroBeforePole(
            f"profile started at {r_a} has no further zero below r = {SHOOT_STOP}")
    r_b = float(sol.t_events[0][0])
    r_samples = np.linspace(r_a, r_b, n_samples)
    xi_samples = sol.sol(r_samples)[0]
    return r_b, (r_samples, xi_samples)


def find_rb_for_eigenvalue2(r_a):
    """Upper boundary pairing with r_a so the annulus carries eigenvalue 2."""
    if not -1.0 < r_a < 0.0:
        raise ParameterOutOfRange(f"lower boundary {r_a} must lie in (-1, 0)")
    r_b, _ = shoot_next_zero(r_a)
    return r_b


# ---------------------------------------------------------------------------
# 2D assembly

def _flux_1d_s(c_half, ds, ni, nt):
    """Symmetric tridiagonal-in-s operator -d/ds(c d/ds), Dirichlet ends.

    c_half has shape (ni+1, nt): coefficient at the s-midpoints of the
    interior grid, including the two half-cells touching the boundary.
    """
    n = ni * nt
    rows, cols, vals = [], [], []
    idx = np.arange(n).reshape(ni, nt)
    diag = (c_half[:-1] + c_half[1:]) / ds**2
    rows.append(idx.ravel()); cols.append(idx.ravel()); vals.append(diag.ravel())
    off = -c_half[1:-1] / ds**2
    rows.append(idx[:-1].ravel()); cols.append(idx[1:].ravel()); vals.append(off.ravel())
    rows.append(idx[1:].ravel()); cols.append(idx[:-1].ravel()); vals.append(off.ravel())
    return sp.csr_matrix((np.concatenate(vals),
                          (np.concatenate(rows), np.concatenate(cols))),
                         shape=(n, n))


def _flux_1d_theta(c_half, dth, ni, nt):
    """Symmetric periodic operator -d/dth(c d/dth); c_half at (i, j+1/2)."""
    n = ni * nt
    idx = np.arange(n).reshape(ni, nt)
    c_prev = np.roll(c_half, 1, axis=1)
    rows, cols, vals = [], [], []
    rows.append(idx.ravel()); cols.append(idx.ravel())
    vals.append(((c_half + c_prev) / dth**2).ravel())
    nxt = np.roll(idx, -1, axis=1)
    off = -c_half / dth**2
    rows.append(idx.ravel()); cols.append(nxt.ravel()); vals.append(off.ravel())
    rows.append(nxt.ravel()); cols.append(idx.ravel()); vals.append(off.ravel())
    return sp.csr_matrix((np.concatenate(vals),
                          (np.concatenate(rows), np.concatenate(cols))),
                         shape=(n, n))


def _centered_ops(ds, dth, ni, nt):
    """Centered first-difference matrices in s (Dirichlet) and theta."""
    n = ni * nt
    idx = np.arange(n).reshape(ni, nt)
    rows, cols, vals = [], [], []
    rows.append(idx[:-1].ravel()); cols.append(idx[1:].ravel())
    vals.append(np.full((ni - 1) * nt, 1.0 / (2 * ds)))
    rows.append(idx[1:].ravel()); cols.append(idx[:-1].ravel())
    vals.append(np.full((ni - 1) * nt, -1.0 / (2 * ds)))
    d_s = sp.csr_matrix((np.concatenate(vals),
                         (np.concatenate(rows), np.concatenate(cols))),
                        shape=(n, n))
    nxt = np.roll(idx, -1, axis=1)
    prv = np.roll(idx, 1, axis=1)
    rows = [idx.ravel(), idx.ravel()]
    cols = [nxt.ravel(), prv.ravel()]
    vals = [np.full(n, 1.0 / (2 * dth)), np.full(n, -1.0 / (2 * dth))]
    d_t = sp.csr_matrix((np.concatenate(vals),
                         (np.concatenate(rows), np.concatenate(cols))),
                        shape=(n, n))
    return d_s, d_t


def _assemble_annulus(spec):
    """Stiffness/mass matrices of the mapped annulus problem.

    Energy density in (s, theta) coordinates with r(s,th) = (1-s)rho_- +
    s*rho_+, R_s = rho_+ - rho_-, R_th = (1-s)rho_-' + s*rho_+':

        c_ss xi_s^2 + 2 c_st xi_s xi_th + c_tt xi_th^2,
        c_ss = ((1-r^2) + R_th^2/(1-r^2)) / R_s,
        c_st = -R_th / (1-r^2),
        c_tt = R_s / (1-r^2),

    with mass weight R_s (area element R_s ds dth, det g = 1).
    """
    n_r, nt = spec.resolution
    ni = n_r - 2
    ds = 1.0 / (n_r - 1)
    dth = 2.0 * np.pi / nt
    th = np.arange(nt) * dth
    rho_m, rho_p = spec.rho_minus(th), spec.rho_plus(th)
    dm, dp = spec._rho_prime(th, 0), spec._rho_prime(th, 1)

    def coeffs(s_grid, th_idx_shift=0.0):
        s = s_grid[:, None]
        tt = th + th_idx_shift * dth
        rm = spec.rho_minus(tt)[None, :]
        rp = spec.rho_plus(tt)[None, :]
        rmp = spec._rho_prime(tt, 0)[None, :]
        rpp = spec._rho_prime(tt, 1)[None, :]
        r = (1.0 - s) * rm + s * rp
        r_s = rp - rm
        r_t = (1.0 - s) * rmp + s * rpp
        one = 1.0 - r * r
        return r, r_s, r_t, one

    s_int = (1.0 + np.arange(ni)) * ds
    s_half = (0.5 + np.arange(ni + 1)) * ds

    _, rs_h, rt_h, one_h = coeffs(s_half)
    c_ss = (one_h + rt_h**2 / one_h) / rs_h
    a_ss = _flux_1d_s(c_ss, ds, ni, nt)

    _, rs_th, _, one_th = coeffs(s_int, th_idx_shift=0.5)
    c_tt = rs_th / one_th
    a_tt = _flux_1d_theta(c_tt, dth, ni, nt)

    _, _, rt_n, one_n = coeffs(s_int)
    c_st = (-rt_n / one_n).ravel()
    d_s, d_t = _centered_ops(ds, dth, ni, nt)
    c_diag = sp.diags(c_st)
    # factor ds*dth of the quadrature divides out of both sides
    a_mix = (d_s.T @ c_diag @ d_t + d_t.T @ c_diag @ d_s)

    a = a_ss + a_tt + a_mix
    _, rs_n, _, _ = coeffs(s_int)
    mass = np.broadcast_to(rs_n, (ni, nt)).ravel().copy()

    r_nodes_mean = (1.0 - s_int)[:, None] * rho_m[None, :] \
        + s_int[:, None] * rho_p[None, :]
    return a, mass, (ni, nt, ds, dth, th, rho_m, rho_p, dm, dp, r_nodes_mean)


def _assemble_disk(spec):
    """Cell-centered operator on the cap r in (0, 1).

    Nodes at r_i = (i + 1/2) h with N h = 1: the top flux face sits at
    r = 1 where the radial coefficient 1 - r^2 vanishes, so the natural
    pole condition is exact; the Dirichlet equator at r = 0 enters
    through a mirror ghost value.
    """
    n_r, nt = spec.resolution
    h = 1.0 / n_r
    dth = 2.0 * np.pi / nt
    r_nodes = (0.5 + np.arange(n_r)) * h
    r_faces = np.arange(n_r + 1) * h
    c_face = 1.0 - r_faces**2

    n = n_r * nt
    idx = np.arange(n).reshape(n_r, nt)
    rows, cols, vals = [], [], []
    # the r = 0 ghost is the mirror of node 0, doubling the first face flux
    diag = np.empty((n_r, nt))
    diag[:] = ((c_face[:-1] + c_face[1:]) / h**2)[:, None]
    diag[0] += c_face[0] / h**2
    rows.append(idx.ravel()); cols.append(idx.ravel()); vals.append(diag.ravel())
    off = np.repeat(-c_face[1:-1] / h**2, nt)
    rows.append(idx[:-1].ravel()); cols.append(idx[1:].ravel()); vals.append(off)
    rows.append(idx[1:].ravel()); cols.append(idx[:-1].ravel()); vals.append(off)
    a = sp.csr_matrix((np.concatenate(vals),
                       (np.concatenate(rows), np.concatenate(cols))),
                      shape=(n, n))
    c_theta = np.repeat(1.0 / (1.0 - r_nodes**2), nt).reshape(n_r, nt)
    a = a + _flux_1d_theta(c_theta, dth, n_r, nt)
    mass = np.ones(n)
    return a, mass, (n_r, nt, h, dth, r_nodes)


def dirichlet_solve(spec):
    """Eigenpair of the Laplace-Beltrami Dirichlet problem nearest 2.

    Shift-invert Lanczos around shift 2 on the symmetric generalized
    problem A x = lambda M x; the eigenfunction is oriented positive and
    normalized to sup 1.  Raises DegenerateNearTwo when two distinct
    eigenvalues fall within the cluster tolerance of each other near 2.
    """
    n_r, nt = spec.resolution
    if n_r < 32 or (spec.kind != "disk" and nt < 8):
        raise ParameterOutOfRange(f"resolution {spec.resolution} too coarse")

    if spec.kind == "disk":
        a, mass, aux = _assemble_disk(spec)
    else:
        a, mass, aux = _assemble_annulus(spec)

    m = sp.diags(mass)
    k = min(4, a.shape[0] - 1)
    try:
        vals, vecs = eigsh(a, k=k, M=m, sigma=2.0, which="LM", maxiter=10000)
    except Exception as exc:  # ARPACK failures surface as library errors
        raise EigenNotConverged(str(exc)) from exc
    order = np.argsort(np.abs(vals - 2.0))
    lam = float(vals[order[0]])
    if k >= 2 and abs(vals[order[1]] - vals[order[0]]) < CLUSTER_TOL:
        raise DegenerateNearTwo(
            f"eigenvalues {vals[order[0]]} and {vals[order[1]]} cluster near 2")
    x = vecs[:, order[0]]
    if np.sum(x) < 0:
        x = -x
    resid = float(np.linalg.norm(a @ x - lam * (mass * x)))
    x = x / np.max(np.abs(x))

    if spec.kind == "disk":
        n_r, nt, h, dth, r_nodes = aux
        grid = x.reshape(n_r, nt)
        # quadratic through the Dirichlet zero and the first two cells
        g0 = (9.0 * grid[0] - grid[1]) / (3.0 * h)
        bgrad = [np.abs(g0)]  # sqrt(1 - r^2) = 1 at the equator
        # cell-centered grid: the Dirichlet circle r = 0 is a face, not a node
        mask = np.full(grid.shape, INTERIOR, dtype=np.int8)
        field = ScalarField(r_nodes, np.arange(nt) * dth, grid, mask)
    else:
        ni, nt, ds, dth, th, rho_m, rho_p, dm, dp, r_nodes = aux
        grid = x.reshape(ni, nt)
        r_s = rho_p - rho_m
        # one-sided second-order xi_s at s = 0 and s = 1 (boundary value 0)
        xs_lo = (4.0 * grid[0] - grid[1]) / (2.0 * ds)
        xs_hi = -(4.0 * grid[-1] - grid[-2]) / (2.0 * ds)
        bgrad = []
        for xs, rho, rt in ((xs_lo, rho_m, dm), (xs_hi, rho_p, dp)):
            one = 1.0 - rho**2
            bgrad.append(np.abs(xs) / np.abs(r_s) * np.sqrt(one + rt**2 / one))
        if spec.kind == "rot_annulus":
            r_full = np.concatenate(
                ([spec.r_lower], r_nodes[:, 0], [spec.r_upper]))
            values = np.vstack([np.zeros(nt), grid, np.zeros(nt)])
            field = ScalarField(r_full, th, values)
        else:
            # mapped grid: store against the mean-height nodes; the mapped
            # geometry stays available through spec
            s_full = np.linspace(0.0, 1.0, ni + 2)
            values = np.vstack([np.zeros(nt), grid, np.zeros(nt)])
            field = ScalarField(s_full * (spec.r_upper - spec.r_lower)
                                + spec.r_lower, th, values)
    return EigenSolution(lam=lam, field=field, boundary_grad=bgrad,
                         residual_l2=resid, spec=spec)


def sphere_cluster_near_two(n_r=128, n_theta=64):
    """Eigenvalues nearest 2 on the full sphere (no boundary).

    Cell-centered in r over (-1, 1); both pole faces carry zero radial
    coefficient, so no boundary condition is imposed.  Returns the four
    eigenvalues nearest 2; the first three should form the degree-1
    harmonic cluster at 2.
    """
    h = 2.0 / n_r
    dth = 2.0 * np.pi / n_theta
    r_nodes = -1.0 + (0.5 + np.arange(n_r)) * h
    r_faces = -1.0 + np.arange(n_r + 1) * h
    c_face = 1.0 - r_faces**2
    n = n_r * n_theta
    idx = np.arange(n).reshape(n_r, n_theta)
    rows, cols, vals = [], [], []
    diag = ((c_face[:-1] + c_face[1:]) / h**2)[:, None] * np.ones((1, n_theta))
    rows.append(idx.ravel()); cols.append(idx.ravel()); vals.append(diag.ravel())
    off = np.repeat(-c_face[1:-1] / h**2, n_theta)
    rows.append(idx[:-1].ravel()); cols.append(idx[1:].ravel()); vals.append(off)
    rows.append(idx[1:].ravel()); cols.append(idx[:-1].ravel()); vals.append(off)
    a = sp.csr_matrix((np.concatenate(vals),
                       (np.concatenate(rows), np.concatenate(cols))),
                      shape=(n, n))
    c_theta = np.repeat(1.0 / (1.0 - r_nodes**2), n_theta).reshape(n_r, n_theta)
    a = a + _flux_1d_theta(c_theta, dth, n_r, n_theta)
    vals_, _ = eigsh(a, k=5, sigma=2.0, which="LM", maxiter=10000)
    return np.sort(vals_[np.argsort(np.abs(vals_ - 2.0))[:4]])


def overdetermined_residual(sol):
    """Per-boundary-component (b_i, max deviation, relative deviation).

    b_i is the mean of |grad xi| along the component; the deviation
    quantifies how far the solution is from satisfying the constant
    Neumann condition of the overdetermined problem.
    """
    out = []
    for samples in sol.boundary_grad:
        b = float(np.mean(samples))
        dev = float(np.max(np.abs(samples - b)))
        out.append((b, dev, dev / b if b > 0 else np.inf))
    return out


def export_solution_csv(sol, path):
    """Node table r, theta, value with 17 significant digits."""
    lines = ["r,theta,value"]
    f = sol.field
    for i, r in enumerate(f.r_nodes):
        for j, th in enumerate(f.theta_nodes):
            lines.append(f"{r:.17g},{th:.17g},{f.values[i, j]:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def solution_summary(sol):
    """JSON-ready summary: eigenvalue, per-component b_i and deviations."""
    comps = overdetermined_residual(sol)
    return {
        "lambda": sol.lam,
        "residual_l2": sol.residual_l2,
        "components": [
            {"b": b, "max_deviation": d, "relative_deviation": rd}
            for b, d, rd in comps
        ],
    }
