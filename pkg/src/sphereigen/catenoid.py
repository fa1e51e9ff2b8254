"""Catenoids, the support-function correspondence and mesh validators.

The support map X(z) = grad xi(z) + xi(z) z sends a solution field on a
spherical domain to a surface whose Gauss map is z itself; applied to
the model profiles it produces the family of catenoids

    psi(r, theta) = alpha (cos(theta)/sqrt(1-r^2),
                           sin(theta)/sqrt(1-r^2),
                           arctanh(r) - omega),

with unit normal N(r, theta) = (sqrt(1-r^2) cos(theta),
sqrt(1-r^2) sin(theta), -r).  The validators check minimality (discrete
mean curvature), free-boundary orthogonality and flux balance, Gauss-map
loop disjointness, the radial-graph property and the support-function
critical set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import model_family as mf
from .errors import DegenerateTriangle, ParameterOutOfRange
from .sphere_core import embed_rt, frame_vectors, jet_grid

FIB_RAYS = 10000


@dataclass(frozen=True)
class SurfaceMesh:
    vertices: np.ndarray       # (n, 3)
    triangles: np.ndarray      # (m, 3) consistent orientation
    boundary_loops: tuple      # ordered index cycles
    vertex_normals: np.ndarray  # (n, 3) unit
    grid_shape: tuple = None   # (n_r, n_theta) when grid-structured

    @property
    def mean_edge_length(self):
        p = self.vertices
        t = self.triangles
        e = np.concatenate([p[t[:, 1]] - p[t[:, 0]],
                            p[t[:, 2]] - p[t[:, 1]],
                            p[t[:, 0]] - p[t[:, 2]]])
        return float(np.mean(np.linalg.norm(e, axis=1)))


def _grid_mesh(vertices, normals, n_r, n_t):
    """Triangulate an (n_r, n_t) theta-periodic grid of vertices."""
    idx = np.arange(n_r * n_t).reshape(n_r, n_t)
    a = idx[:-1, :]
    b = idx[1:, :]
    c = np.roll(idx[1:, :], -1, axis=1)
    d = np.roll(idx[:-1, :], -1, axis=1)
    tris = np.concatenate([
        np.stack([a.ravel(), b.ravel(), c.ravel()], axis=1),
        np.stack([a.ravel(), c.ravel(), d.ravel()], axis=1),
    ])
    # orient triangles with the supplied normals
    p = vertices
    n_face = np.cross(p[tris[:, 1]] - p[tris[:, 0]], p[tris[:, 2]] - p[tris[:, 0]])
    n_avg = (normals[tris[:, 0]] + normals[tris[:, 1]] + normals[tris[:, 2]])
    flip = np.einsum("ij,ij->i", n_face, n_avg) < 0
    tris[flip] = tris[flip][:, ::-1]
    loops = (tuple(idx[0]), tuple(idx[-1]))
    return SurfaceMesh(vertices=vertices, triangles=tris,
                       boundary_loops=loops, vertex_normals=normals,
                       grid_shape=(n_r, n_t))


def catenoid_mesh(alpha, omega, r_range, resolution=(128, 64)):
    """Mesh of the catenoid psi_{alpha,omega} over r_range x [0, 2 pi)."""
    if alpha <= 0:
        raise ParameterOutOfRange(f"alpha must be positive, got {alpha}")
    r_lo, r_hi = r_range
    if not -1.0 < r_lo < r_hi < 1.0:
        raise ParameterOutOfRange(f"r_range {r_range} not inside (-1, 1)")
    n_r, n_t = resolution
    r = np.linspace(r_lo, r_hi, n_r)[:, None]
    th = (np.arange(n_t) * (2.0 * np.pi / n_t))[None, :]
    rho = 1.0 / np.sqrt(1.0 - r**2)
    x = alpha * rho * np.cos(th)
    y = alpha * rho * np.sin(th)
    z = alpha * (np.arctanh(r) - omega) * np.ones_like(th)
    verts = np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1)
    sq = np.sqrt(1.0 - r**2)
    nx = sq * np.cos(th)
    ny = sq * np.sin(th)
    nz = -r * np.ones_like(th)
    normals = np.stack([nx.ravel(), ny.ravel(), nz.ravel()], axis=1)
    return _grid_mesh(verts, normals, n_r, n_t)


def model_catenoid(R, resolution=(128, 64)):
    """The catenoid whose support function is the model profile at R.

    Its upper boundary loop lies on the unit sphere; the lower one on a
    sphere of radius alpha / (|r_minus| sqrt(1 - r_minus^2)) <= 1.
    """
    m = mf.model(R)
    return catenoid_mesh(m.alpha, m.omega, (m.r_minus, m.r_plus), resolution)


def support_map(field):
    """Surface traced by X(z) = grad xi(z) + xi(z) z over the field grid.

    Gradients come from the one-sided second-order jets, so the vertices
    agree with the closed-form surface to O(h^2).  The vertex normal is
    the grid point z itself (the defining property of a support map).
    """
    g = jet_grid(field, one_sided=True)
    # the boundary rows dominate the free-boundary diagnostics; promote
    # their radial derivative to a 4th-order one-sided stencil
    v, h = field.values, field.dr
    if field.shape[0] >= 5:
        grad_n = g["grad_n"].copy()
        d_lo = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
        d_hi = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4] + 3 * v[-5]) / (12 * h)
        grad_n[0] = np.sqrt(1.0 - field.r_nodes[0] ** 2) * d_lo
        grad_n[-1] = np.sqrt(1.0 - field.r_nodes[-1] ** 2) * d_hi
        g = dict(g, grad_n=grad_n)
    rr = field.r_nodes[:, None] * np.ones((1, field.shape[1]))
    tt = np.ones((field.shape[0], 1)) * field.theta_nodes[None, :]
    z = embed_rt(rr, tt)
    n_hat, t_hat = frame_vectors(rr, tt)
    verts = (g["grad_n"][..., None] * n_hat + g["grad_t"][..., None] * t_hat
             + field.values[..., None] * z)
    n_r, n_t = field.shape
    return _grid_mesh(verts.reshape(-1, 3), z.reshape(-1, 3), n_r, n_t)


# ---------------------------------------------------------------------------
# Discrete mean curvature

def _triangle_geometry(mesh):
    p = mesh.vertices
    t = mesh.triangles
    e = [p[t[:, (k + 2) % 3]] - p[t[:, (k + 1) % 3]] for k in range(3)]
    n_face = np.cross(e[1], -e[2])
    double_area = np.linalg.norm(n_face, axis=1)
    if np.any(double_area < 2e-14):
        raise DegenerateTriangle("triangle area below 1e-14")
    # cotangent of the angle at each corner
    cots = []
    for k in range(3):
        u = -e[(k + 2) % 3]
        v = e[(k + 1) % 3]
        cots.append(np.einsum("ij,ij->i", u, v) / double_area)
    return e, double_area, np.stack(cots, axis=1)


def _mixed_voronoi_areas(mesh, double_area, cots):
    """Per-vertex mixed Voronoi area (obtuse triangles split by half/quarter)."""
    t = mesh.triangles
    n = mesh.vertices.shape[0]
    area = double_area / 2.0
    areas = np.zeros(n)
    p = mesh.vertices
    sq = np.empty((t.shape[0], 3))
    for k in range(3):
        sq[:, k] = np.sum((p[t[:, (k + 2) % 3]] - p[t[:, (k + 1) % 3]])**2, axis=1)
    obtuse = cots < 0.0
    any_obtuse = np.any(obtuse, axis=1)
    # Voronoi area of corner k: (|e_{k+1}|^2 cot_{k+1} + |e_{k+2}|^2 cot_{k+2})/8
    for k in range(3):
        k1, k2 = (k + 1) % 3, (k + 2) % 3
        vor = (sq[:, k1] * cots[:, k1] + sq[:, k2] * cots[:, k2]) / 8.0
        contrib = np.where(any_obtuse,
                           np.where(obtuse[:, k], area / 2.0, area / 4.0),
                           vor)
        np.add.at(areas, t[:, k], contrib)
    return areas


def _interior_vertices(mesh):
    interior = np.ones(mesh.vertices.shape[0], dtype=bool)
    for loop in mesh.boundary_loops:
        interior[list(loop)] = False
    return interior


def mean_curvature_residual(mesh):
    """(max |H|, area-weighted L2 of H) over interior vertices.

    H is half the norm of the cotangent-Laplacian of the position divided
    by the mixed Voronoi vertex area; it vanishes on minimal surfaces up
    to discretization error.
    """
    p = mesh.vertices
    t = mesh.triangles
    _, double_area, cots = _triangle_geometry(mesh)
    lap = np.zeros_like(p)
    for k in range(3):
        i = t[:, (k + 1) % 3]
        j = t[:, (k + 2) % 3]
        w = cots[:, k][:, None] / 2.0
        np.add.at(lap, i, w * (p[j] - p[i]))
        np.add.at(lap, j, w * (p[i] - p[j]))
    areas = _mixed_voronoi_areas(mesh, double_area, cots)
    interior = _interior_vertices(mesh)
    h = np.linalg.norm(lap[interior], axis=1) / (2.0 * areas[interior])
    w = areas[interior]
    return float(np.max(h)), float(np.sqrt(np.sum(h * h * w) / np.sum(w)))


# ---------------------------------------------------------------------------
# Boundary report

@dataclass(frozen=True)
class LoopReport:
    sphere_radius: float
    radius_deviation: float
    orthogonality_deviation: float
    flux_vector: np.ndarray


@dataclass(frozen=True)
class BoundaryReport:
    loops: tuple

    @property
    def flux_imbalance(self):
        return float(np.linalg.norm(sum(lp.flux_vector for lp in self.loops)))


def _loop_conormals(mesh, loop):
    """Exterior unit conormal at each vertex of a boundary loop."""
    p = mesh.vertices
    idx = np.array(loop)
    pts = p[idx]
    nxt = np.roll(pts, -1, axis=0)
    prv = np.roll(pts, 1, axis=0)
    tang = nxt - prv
    tang /= np.linalg.norm(tang, axis=1)[:, None]
    nrm = mesh.vertex_normals[idx]
    nu = np.cross(nrm, tang)
    nu /= np.linalg.norm(nu, axis=1)[:, None]
    # orient away from the surface: the one-ring interior lies opposite
    interior_dir = np.zeros_like(nu)
    counts = np.zeros(len(idx))
    pos = {v: k for k, v in enumerate(loop)}
    on_loop = set(loop)
    tris = mesh.triangles
    for tri in tris[np.any(np.isin(tris, idx), axis=1)]:
        for v in tri:
            if v in on_loop:
                k = pos[v]
                others = [w for w in tri if w != v]
                interior_dir[k] += np.mean(p[others], axis=0) - p[v]
                counts[k] += 1
    flip = np.einsum("ij,ij->i", nu, interior_dir) > 0
    nu[flip] = -nu[flip]
    return idx, pts, nu


def boundary_report(mesh):
    """Sphere radii, orthogonality deviations and flux per boundary loop."""
    loops = []
    for loop in mesh.boundary_loops:
        idx, pts, nu = _loop_conormals(mesh, loop)
        radii = np.linalg.norm(pts, axis=1)
        r_mean = float(np.mean(radii))
        ortho = np.einsum("ij,ij->i", pts, nu) / radii
        seg = np.roll(pts, -1, axis=0) - pts
        seg_len = np.linalg.norm(seg, axis=1)
        nu_mid = 0.5 * (nu + np.roll(nu, -1, axis=0))
        flux = (nu_mid * seg_len[:, None]).sum(axis=0)
        loops.append(LoopReport(
            sphere_radius=r_mean,
            radius_deviation=float(np.max(np.abs(radii - r_mean))),
            orthogonality_deviation=float(np.max(np.abs(ortho - 1.0))),
            flux_vector=flux,
        ))
    return BoundaryReport(loops=tuple(loops))


# ---------------------------------------------------------------------------
# Gauss map, radial graph, support sign

def _fibonacci_directions(n, seed=0):
    golden = (1.0 + np.sqrt(5.0)) / 2.0
    k = np.arange(n)
    z = 1.0 - (2.0 * k + 1.0) / n
    phase = float(np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi))
    th = 2.0 * np.pi * k / golden + phase
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.column_stack([rho * np.cos(th), rho * np.sin(th), z])


def _ray_hits(mesh, directions):
    """Number of transversal triangle hits per origin ray (Moeller-Trumbore).

    A coarse centroid cone prefilter keeps the exact test to a small
    candidate set per ray.
    """
    p = mesh.vertices
    t = mesh.triangles
    v0, v1, v2 = p[t[:, 0]], p[t[:, 1]], p[t[:, 2]]
    cent = (v0 + v1 + v2) / 3.0
    cn = np.linalg.norm(cent, axis=1)
    spread = np.max(np.stack([
        np.linalg.norm(v0 - cent, axis=1),
        np.linalg.norm(v1 - cent, axis=1),
        np.linalg.norm(v2 - cent, axis=1)]), axis=0)
    cos_margin = np.cos(np.arcsin(np.clip(spread / cn, 0.0, 1.0)) * 1.5 + 1e-3)
    cdir = cent / cn[:, None]
    e1, e2 = v1 - v0, v2 - v0
    hits = np.zeros(directions.shape[0], dtype=int)
    for a, d in enumerate(directions):
        cand = np.nonzero(cdir @ d >= cos_margin)[0]
        if cand.size == 0:
            continue
        h = np.cross(np.broadcast_to(d, (cand.size, 3)), e2[cand])
        det = np.einsum("ij,ij->i", e1[cand], h)
        ok = np.abs(det) > 1e-12
        inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
        s = -v0[cand]
        u = np.einsum("ij,ij->i", s, h) * inv
        q = np.cross(s, e1[cand])
        v = (q @ d) * inv
        dist = np.einsum("ij,ij->i", e2[cand], q) * inv
        inside = ok & (u >= 0) & (v >= 0) & (u + v <= 1) & (dist > 0)
        hits[a] = int(np.count_nonzero(inside))
    return hits


@dataclass(frozen=True)
class GaussGraphReport:
    gauss_loops_disjoint: bool
    min_gauss_distance: float
    radial_graph: bool
    max_ray_hits: int
    support_min_interior: float


def gauss_and_graph_checks(mesh, n_rays=FIB_RAYS, seed=0):
    """Gauss-loop disjointness, radial-graph verdict, support positivity."""
    n1 = mesh.vertex_normals[list(mesh.boundary_loops[0])]
    n2 = mesh.vertex_normals[list(mesh.boundary_loops[1])]
    dots = np.clip(n1 @ n2.T, -1.0, 1.0)
    min_dist = float(np.min(np.arccos(dots)))
    hits = _ray_hits(mesh, _fibonacci_directions(n_rays, seed))
    u = np.einsum("ij,ij->i", mesh.vertices, mesh.vertex_normals)
    interior = _interior_vertices(mesh)
    return GaussGraphReport(
        gauss_loops_disjoint=bool(min_dist > 0.0),
        min_gauss_distance=min_dist,
        radial_graph=bool(np.max(hits) <= 1),
        max_ray_hits=int(np.max(hits)),
        support_min_interior=float(np.min(u[interior])),
    )


# ---------------------------------------------------------------------------
# Support critical set

def _tangential_gradients(mesh, scalar):
    """Least-squares tangent-plane gradient norm of a vertex scalar.

    Batched normal equations over the one-ring edges; the normal
    direction is regularized in with a zero right-hand side, so the
    solve stays in the tangent plane.
    """
    p = mesh.vertices
    n = p.shape[0]
    normals = mesh.vertex_normals
    t = mesh.triangles
    src = np.concatenate([t[:, 0], t[:, 1], t[:, 2], t[:, 1], t[:, 2], t[:, 0]])
    dst = np.concatenate([t[:, 1], t[:, 2], t[:, 0], t[:, 0], t[:, 1], t[:, 2]])
    e = p[dst] - p[src]
    e = e - np.einsum("ij,ij->i", e, normals[src])[:, None] * normals[src]
    df = scalar[dst] - scalar[src]
    a = np.zeros((n, 3, 3))
    b = np.zeros((n, 3))
    np.add.at(a, src, e[:, :, None] * e[:, None, :])
    np.add.at(b, src, e * df[:, None])
    tr = np.trace(a, axis1=1, axis2=2)
    a = a + (0.5 * tr + 1e-300)[:, None, None] \
        * normals[:, :, None] * normals[:, None, :]
    g = np.linalg.solve(a, b[:, :, None])[:, :, 0]
    return np.linalg.norm(g, axis=1)


@dataclass(frozen=True)
class CriticalSetReport:
    u_critical: np.ndarray
    dist_critical: np.ndarray
    coincide: bool
    circle_z: float
    circle_radius: float
    circle_residual: float
    sphere_radius: float


def support_critical_set(mesh, crit_factor=10.0):
    """Discrete critical vertices of the support function and of |p|^2.

    Both sets are thresholded at crit_tol = crit_factor * h * range; they
    coincide when every vertex of one set lies within one mesh cell of
    the other.  The critical set is also fitted to a horizontal circle.
    """
    p = mesh.vertices
    u = np.einsum("ij,ij->i", p, mesh.vertex_normals)
    d = np.einsum("ij,ij->i", p, p)
    h = mesh.mean_edge_length
    gu = _tangential_gradients(mesh, u)
    gd = _tangential_gradients(mesh, d)
    tol_u = crit_factor * h * float(np.ptp(u))
    tol_d = crit_factor * h * float(np.ptp(d))
    cu = np.nonzero(gu < tol_u)[0]
    cd = np.nonzero(gd < tol_d)[0]
    coincide = False
    if cu.size and cd.size:
        du = np.min(np.linalg.norm(p[cu][:, None, :] - p[cd][None, :, :],
                                   axis=2), axis=1)
        dd = np.min(np.linalg.norm(p[cd][:, None, :] - p[cu][None, :, :],
                                   axis=2), axis=1)
        coincide = bool(np.max(du) <= 2.0 * h and np.max(dd) <= 2.0 * h)
    pts = p[cu] if cu.size else np.zeros((0, 3))
    if pts.shape[0]:
        z0 = float(np.mean(pts[:, 2]))
        rad = np.hypot(pts[:, 0], pts[:, 1])
        r0 = float(np.mean(rad))
        resid = float(np.max(np.hypot(pts[:, 2] - z0, rad - r0)))
        sph = float(np.mean(np.linalg.norm(pts, axis=1)))
    else:
        z0 = r0 = resid = sph = float("nan")
    return CriticalSetReport(u_critical=cu, dist_critical=cd,
                             coincide=coincide, circle_z=z0,
                             circle_radius=r0, circle_residual=resid,
                             sphere_radius=sph)


# ---------------------------------------------------------------------------
# OBJ export

def export_obj(mesh, path):
    """Wavefront OBJ with normals, faces and boundary loops as lines."""
    lines = []
    for v in mesh.vertices:
        lines.append(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}")
    for n in mesh.vertex_normals:
        lines.append(f"vn {n[0]:.17g} {n[1]:.17g} {n[2]:.17g}")
    for t in mesh.triangles:
        lines.append(
            f"f {t[0]+1}//{t[0]+1} {t[1]+1}//{t[1]+1} {t[2]+1}//{t[2]+1}")
    for loop in mesh.boundary_loops:
        seq = " ".join(str(v + 1) for v in tuple(loop) + (loop[0],))
        lines.append(f"l {seq}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
