"""Coordinates, metric and discrete calculus on the unit two-sphere.

The sphere is parametrized in cylindrical coordinates (r, theta),

    (sqrt(1-r^2) cos(theta), sqrt(1-r^2) sin(theta), r),

with induced metric  g = dr^2/(1-r^2) + (1-r^2) dtheta^2  and orthonormal
frame  n = sqrt(1-r^2) d/dr,  t = d/dtheta / sqrt(1-r^2).

Scalar fields live on tensor-product (r, theta) grids, uniform in both
directions and periodic in theta.  All frame derivatives are second-order
finite differences; one-sided stencils are used at the r-boundaries on
request.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import DegenerateGradient, StencilUnavailable

# Computations never touch the poles; arctanh and the metric blow up there.
POLE_CLEARANCE = 1e-9

# kappa is undefined at critical points; the floor is scaled by the field range.
CURVATURE_GRAD_FLOOR = 1e-8

# domain_mask codes
OUTSIDE = 0
INTERIOR = 1
BOUNDARY = 2


def normalize_theta(theta):
    """Wrap angles into [0, 2*pi)."""
    two_pi = 2.0 * np.pi
    t = np.mod(theta, two_pi)
    # mod of a tiny negative angle rounds up to 2*pi itself
    return np.where(t >= two_pi, 0.0, t)


@dataclass(frozen=True)
class SphericalPoint:
    """A point on the unit sphere in cylindrical coordinates."""

    r: float
    theta: float

    def __post_init__(self):
        if abs(self.r) > 1.0:
            raise ValueError(f"height coordinate out of [-1, 1]: {self.r}")
        object.__setattr__(self, "theta", float(normalize_theta(self.theta)))


@dataclass(frozen=True)
class MetricCoeffs:
    """Diagonal metric coefficients at a given height r."""

    g_rr: float
    g_tt: float


def metric_coeffs(r):
    """Metric coefficients g_rr = 1/(1-r^2), g_tt = 1-r^2 (product is 1)."""
    one_minus = 1.0 - np.asarray(r, dtype=float) ** 2
    if np.isscalar(r) or np.ndim(r) == 0:
        return MetricCoeffs(g_rr=1.0 / float(one_minus), g_tt=float(one_minus))
    return 1.0 / one_minus, one_minus


def embed(p):
    """Map a SphericalPoint (or (r, theta) arrays) to Cartesian 3-space."""
    if isinstance(p, SphericalPoint):
        return embed_rt(p.r, p.theta)
    raise TypeError("embed expects a SphericalPoint; use embed_rt for arrays")


def embed_rt(r, theta):
    """Cartesian embedding of (r, theta); broadcasts over arrays."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    rho = np.sqrt(np.clip(1.0 - r**2, 0.0, None))
    out = np.stack(
        np.broadcast_arrays(rho * np.cos(theta), rho * np.sin(theta), r), axis=-1
    )
    return out


def frame_vectors(r, theta):
    """Unit frame (n_hat, t_hat) pushed to 3-space at (r, theta)."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    rho = np.sqrt(np.clip(1.0 - r**2, 0.0, None))
    ct, st = np.cos(theta), np.sin(theta)
    n_hat = np.stack(np.broadcast_arrays(-r * ct, -r * st, rho), axis=-1)
    t_hat = np.stack(np.broadcast_arrays(-st, ct, np.zeros_like(r * theta)), axis=-1)
    return n_hat, t_hat


def geodesic_distance(p, q):
    """Great-circle distance in radians between two points."""
    a = embed_rt(p.r, p.theta) if isinstance(p, SphericalPoint) else np.asarray(p)
    b = embed_rt(q.r, q.theta) if isinstance(q, SphericalPoint) else np.asarray(q)
    return float(np.arccos(np.clip(np.dot(a, b), -1.0, 1.0)))


@dataclass(frozen=True)
class FirstSecondJet:
    """Value, frame gradient and frame Hessian of a field at a point."""

    value: float
    grad_n: float
    grad_t: float
    hess_nn: float
    hess_nt: float
    hess_tt: float

    @property
    def grad_norm(self):
        return float(np.hypot(self.grad_n, self.grad_t))

    @property
    def laplacian(self):
        return self.hess_nn + self.hess_tt


@dataclass(frozen=True)
class ScalarField:
    """Sampled function on a tensor-product (r, theta) grid.

    r_nodes is strictly increasing and uniformly spaced inside (-1, 1);
    theta_nodes is uniform on [0, 2*pi) and periodic.  domain_mask marks
    nodes as OUTSIDE/INTERIOR/BOUNDARY; by default the two extreme r rows
    are boundary and everything else interior.
    """

    r_nodes: np.ndarray
    theta_nodes: np.ndarray
    values: np.ndarray
    domain_mask: np.ndarray = dc_field(default=None)

    def __post_init__(self):
        r = np.asarray(self.r_nodes, dtype=float)
        th = np.asarray(self.theta_nodes, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or th.ndim != 1 or v.shape != (r.size, th.size):
            raise ValueError("values must be shaped (len(r_nodes), len(theta_nodes))")
        if np.any(np.diff(r) <= 0):
            raise ValueError("r_nodes must be strictly increasing")
        if np.max(np.abs(r)) > 1.0 - POLE_CLEARANCE * 0.5:
            raise ValueError("r_nodes must stay away from the poles")
        dr = np.diff(r)
        if r.size > 2 and np.max(np.abs(dr - dr[0])) > 1e-9 * dr[0]:
            raise ValueError("r_nodes must be uniformly spaced")
        dth = np.diff(th)
        if th.size > 1 and np.max(np.abs(dth - dth[0])) > 1e-12:
            raise ValueError("theta_nodes must be uniformly spaced")
        mask = self.domain_mask
        if mask is None:
            mask = np.full(v.shape, INTERIOR, dtype=np.int8)
            mask[0, :] = BOUNDARY
            mask[-1, :] = BOUNDARY
        else:
            mask = np.asarray(mask, dtype=np.int8)
            if mask.shape != v.shape:
                raise ValueError("domain_mask shape mismatch")
        object.__setattr__(self, "r_nodes", r)
        object.__setattr__(self, "theta_nodes", th)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "domain_mask", mask)

    @property
    def dr(self):
        return float(self.r_nodes[1] - self.r_nodes[0]) if self.r_nodes.size > 1 else 0.0

    @property
    def dtheta(self):
        return 2.0 * np.pi / self.theta_nodes.size

    @property
    def shape(self):
        return self.values.shape

    def scaled(self, factor):
        """Return the field multiplied by a constant."""
        return ScalarField(self.r_nodes, self.theta_nodes, self.values * factor,
                           self.domain_mask)


def field_from_function(fn, r_lo, r_hi, n_r, n_theta, lower_boundary=True,
                        upper_boundary=True):
    """Sample fn(r, theta) on a uniform grid over [r_lo, r_hi] x [0, 2*pi)."""
    r = np.linspace(r_lo, r_hi, n_r)
    th = np.arange(n_theta) * (2.0 * np.pi / n_theta)
    rr, tt = np.meshgrid(r, th, indexing="ij")
    mask = np.full((n_r, n_theta), INTERIOR, dtype=np.int8)
    if lower_boundary:
        mask[0, :] = BOUNDARY
    if upper_boundary:
        mask[-1, :] = BOUNDARY
    vals = np.broadcast_to(np.asarray(fn(rr, tt), dtype=float),
                           (n_r, n_theta)).copy()
    return ScalarField(r, th, vals, mask)


def _d_r(values, h, one_sided):
    """First r-derivative, centered second order; one-sided at the ends."""
    d = np.empty_like(values)
    d[1:-1] = (values[2:] - values[:-2]) / (2.0 * h)
    if one_sided and values.shape[0] >= 3:
        d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h)
        d[-1] = (3.0 * values[-1] - 4.0 * values[-2] + values[-3]) / (2.0 * h)
    else:
        d[0] = np.nan
        d[-1] = np.nan
    return d


def _d_rr(values, h, one_sided):
    d = np.empty_like(values)
    d[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / (h * h)
    if one_sided and values.shape[0] >= 4:
        d[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2]
                - values[3]) / (h * h)
        d[-1] = (2.0 * values[-1] - 5.0 * values[-2] + 4.0 * values[-3]
                 - values[-4]) / (h * h)
    else:
        d[0] = np.nan
        d[-1] = np.nan
    return d


def jet_grid(field, one_sided=False):
    """Frame derivatives of the whole field as arrays.

    Returns a dict with keys value, grad_n, grad_t, grad_norm, hess_nn,
    hess_nt, hess_tt, laplacian, each shaped like field.values.  Rows
    without a full centered stencil are NaN unless one_sided is set.
    """
    v = field.values
    h, ht = field.dr, field.dtheta
    r = field.r_nodes[:, None]
    one_minus = 1.0 - r**2
    sq = np.sqrt(one_minus)

    d_r = _d_r(v, h, one_sided)
    d_rr = _d_rr(v, h, one_sided)
    d_t = (np.roll(v, -1, axis=1) - np.roll(v, 1, axis=1)) / (2.0 * ht)
    d_tt = (np.roll(v, -1, axis=1) - 2.0 * v + np.roll(v, 1, axis=1)) / (ht * ht)
    d_rt = _d_r(d_t, h, one_sided)

    grad_n = sq * d_r
    grad_t = d_t / sq
    hess_nn = one_minus * d_rr - r * d_r
    hess_tt = d_tt / one_minus - r * d_r
    hess_nt = d_rt + r * d_t / one_minus
    return {
        "value": v,
        "grad_n": grad_n,
        "grad_t": grad_t,
        "grad_norm": np.hypot(grad_n, grad_t),
        "hess_nn": hess_nn,
        "hess_nt": hess_nt,
        "hess_tt": hess_tt,
        "laplacian": hess_nn + hess_tt,
    }


def jet(field, i, j, one_sided=False):
    """Jet of the field at grid node (i, j).

    Interior nodes use centered stencils; nodes on the first/last r row
    need one_sided=True, otherwise StencilUnavailable is raised.
    """
    n_r = field.r_nodes.size
    if i < 0 or i >= n_r:
        raise StencilUnavailable(f"row {i} outside grid")
    boundary_row = i in (0, n_r - 1)
    if boundary_row and not one_sided:
        raise StencilUnavailable(
            f"node ({i}, {j}) lacks a centered stencil; pass one_sided=True")
    needed = 4 if boundary_row else 3
    if n_r < needed:
        raise StencilUnavailable("grid too coarse for a second-order stencil")
    if np.any(field.domain_mask[max(0, i - 1):i + 2, :] == OUTSIDE):
        raise StencilUnavailable("stencil touches masked-out nodes")
    g = jet_grid(field, one_sided=one_sided)
    return FirstSecondJet(
        value=float(g["value"][i, j]),
        grad_n=float(g["grad_n"][i, j]),
        grad_t=float(g["grad_t"][i, j]),
        hess_nn=float(g["hess_nn"][i, j]),
        hess_nt=float(g["hess_nt"][i, j]),
        hess_tt=float(g["hess_tt"][i, j]),
    )


def level_curvature(j, grad_floor=None):
    """Geodesic curvature of the level set through a jet.

    kappa = (Hess(grad, grad) - |grad|^2 Lap) / |grad|^3, signed with
    respect to the normal grad/|grad|.  Raises DegenerateGradient when the
    gradient norm is below the floor.
    """
    gn, gt = j.grad_n, j.grad_t
    norm = j.grad_norm
    floor = grad_floor if grad_floor is not None else CURVATURE_GRAD_FLOOR
    if norm <= floor:
        raise DegenerateGradient(f"|grad| = {norm} below floor {floor}")
    hess_gg = j.hess_nn * gn * gn + 2.0 * j.hess_nt * gn * gt + j.hess_tt * gt * gt
    return (hess_gg - norm * norm * j.laplacian) / norm**3


def level_curvature_arrays(g, grad_floor):
    """Vectorized level_curvature over jet_grid arrays; NaN below the floor."""
    gn, gt = g["grad_n"], g["grad_t"]
    norm = g["grad_norm"]
    hess_gg = g["hess_nn"] * gn * gn + 2.0 * g["hess_nt"] * gn * gt \
        + g["hess_tt"] * gt * gt
    with np.errstate(invalid="ignore", divide="ignore"):
        kappa = (hess_gg - norm * norm * g["laplacian"]) / norm**3
    kappa = np.where(norm > grad_floor, kappa, np.nan)
    return kappa
