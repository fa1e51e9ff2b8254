"""Verifiers for the gradient, curvature, energy and length estimates.

Everything here consumes a sampled solution field on the (r, theta) grid
and checks the quantitative structure that characterizes the model
family: the normalized boundary gradient statistic tau, the pseudo-radial
comparison W <= W_model, subharmonicity of P = |grad xi|^2 + xi^2, the
level-set energy E(t), geodesic curvature bounds for the zero and top
level sets, and length estimates including a Crofton quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np
from scipy import ndimage

from . import model_family as mf
from .errors import (
    CriticalLevelSkipped,
    DegenerateLevel,
    EmptyLevel,
    NoBoundaryContact,
    NormalizationMissing,
    OpenCurve,
    TopCurveNotFound,
)
from .sphere_core import (
    BOUNDARY,
    CURVATURE_GRAD_FLOOR,
    INTERIOR,
    OUTSIDE,
    ScalarField,
    embed_rt,
    jet_grid,
    level_curvature_arrays,
)

# ties at the branch threshold resolve to the '+' branch
NWSS_TIE_TOL = 1e-9

GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0


# ---------------------------------------------------------------------------
# Max set and regions

def max_band_width(field):
    """Half-width of the near-maximum band: 10 h^2 times the field scale."""
    return 10.0 * field.dr**2 * float(np.max(np.abs(field.values)))


def _label_periodic(mask):
    """4-connected components of a boolean grid, periodic in axis 1."""
    lab, n = ndimage.label(mask)
    if n > 1:
        # merge labels that touch across the theta seam
        parent = list(range(n + 1))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        left, right = lab[:, 0], lab[:, -1]
        for a, b in zip(left, right):
            if a and b:
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[rb] = ra
        remap = np.array([find(a) for a in range(n + 1)])
        lab = remap[lab]
    labels = [v for v in np.unique(lab) if v != 0]
    return lab, labels


@dataclass(frozen=True)
class MaxComponent:
    kind: str  # 'curve' or 'point'
    node_mask: np.ndarray


@dataclass(frozen=True)
class Region:
    node_mask: np.ndarray
    boundary_rows: tuple  # grid rows of attached zero-level components
    tau: float
    expected_height: float
    branch: str
    boundary_contact: bool


@dataclass(frozen=True)
class NwssReport:
    xi_max: float
    per_component_tau: tuple
    regions: tuple
    max_components: tuple


def max_set(field):
    """Near-maximum nodes classified into curve-like and point-like strata.

    A component is curve-like when removing it disconnects the rest of
    the domain (the discrete counterpart of a closed curve of maxima);
    otherwise it is point-like.
    """
    band = field.values >= np.max(field.values) - max_band_width(field)
    domain = field.domain_mask != OUTSIDE
    band = band & domain
    lab, labels = _label_periodic(band)
    comps = []
    for v in labels:
        comp = lab == v
        rest = domain & ~comp
        _, rest_labels = _label_periodic(rest)
        kind = "curve" if len(rest_labels) > 1 else "point"
        comps.append(MaxComponent(kind=kind, node_mask=comp))
    return tuple(comps)


def _boundary_rows(field):
    rows = []
    if np.all(field.domain_mask[0] == BOUNDARY):
        rows.append(0)
    if np.all(field.domain_mask[-1] == BOUNDARY):
        rows.append(field.shape[0] - 1)
    return rows


def _boundary_grad_norm(field, row):
    """|grad xi| along a boundary row, 4th-order one-sided in r.

    The boundary gradient drives the tau statistic, whose inversion to an
    expected height is sensitive near the pole; the higher-order stencil
    keeps the round trip accurate on steep model profiles.
    """
    v = field.values
    h = field.dr
    if row == 0:
        d = (-25 * v[0] + 48 * v[1] - 36 * v[2] + 16 * v[3] - 3 * v[4]) / (12 * h)
    else:
        d = (25 * v[-1] - 48 * v[-2] + 36 * v[-3] - 16 * v[-4] + 3 * v[-5]) / (12 * h)
    r = field.r_nodes[row]
    one = 1.0 - r * r
    dth = (np.roll(v[row], -1) - np.roll(v[row], 1)) / (2.0 * field.dtheta)
    return np.sqrt(one * d**2 + dth**2 / one)


def nwss(sol_or_field):
    """Normalized boundary gradient report with expected critical heights.

    Accepts an EigenSolution (uses its one-sided boundary gradients) or a
    plain ScalarField (gradients from one-sided stencils on boundary
    rows).  tau per region is the max over the boundary components it
    touches; regions without boundary contact get tau = 0.
    """
    from .eigensolver import EigenSolution  # local to avoid a cycle

    if isinstance(sol_or_field, EigenSolution):
        field = sol_or_field.field
        comp_grads = [np.asarray(g) for g in sol_or_field.boundary_grad]
        rows = _boundary_rows(field)
        if not rows:
            # cell-centered grids carry their boundary data in the solution
            rows = [0] if len(comp_grads) == 1 else [0, field.shape[0] - 1]
    else:
        field = sol_or_field
        rows = _boundary_rows(field)
        comp_grads = [_boundary_grad_norm(field, i) for i in rows]

    xi_max = float(np.max(field.values))
    taus = tuple(float(np.max(cg)) / xi_max for cg in comp_grads)

    comps = max_set(field)
    band = np.zeros(field.shape, dtype=bool)
    for c in comps:
        band |= c.node_mask
    domain = field.domain_mask != OUTSIDE
    lab, labels = _label_periodic(domain & ~band)

    regions = []
    for v in labels:
        rmask = lab == v
        attached, rtaus = [], []
        for row, tau in zip(rows, taus):
            grid_row = min(row, field.shape[0] - 1)
            if np.any(rmask[grid_row]):
                attached.append(row)
                rtaus.append(tau)
        contact = bool(rtaus)
        tau = max(rtaus) if contact else 0.0
        branch = "+" if tau >= mf.family_constants().tau0 - NWSS_TIE_TOL else "-"
        regions.append(Region(
            node_mask=rmask,
            boundary_rows=tuple(attached),
            tau=tau,
            expected_height=mf.invert_tau(tau),
            branch=branch,
            boundary_contact=contact,
        ))
    regions.sort(key=lambda rg: float(np.mean(field.r_nodes[np.any(rg.node_mask, axis=1)])))
    return NwssReport(xi_max=xi_max, per_component_tau=taus,
                      regions=tuple(regions), max_components=comps)


# ---------------------------------------------------------------------------
# Pseudo-radial comparison

def normalize_field(field, rbar):
    """Rescale so the field maximum equals the model maximum at rbar."""
    m = mf.model(rbar)
    return field.scaled(m.xi_max / float(np.max(field.values))), m


def pseudo_radial(field, rbar, branch, region=None):
    """Nodewise inversion of the model profile: Psi with xi_model(Psi) = xi.

    The field must already be normalized to the model maximum of rbar;
    NormalizationMissing is raised otherwise.  Outside an optional region
    mask the values are NaN.
    """
    m = mf.model(rbar)
    vmax = float(np.max(field.values))
    if abs(vmax - m.xi_max) > 1e-8 * m.xi_max:
        raise NormalizationMissing(
            f"field max {vmax} does not match the model maximum {m.xi_max}")
    vals = np.clip(field.values, 0.0, m.xi_max)
    psi = mf.chi_branch(m, vals, branch)
    if region is not None:
        psi = np.where(region.node_mask, psi, np.nan)
    return ScalarField(field.r_nodes, field.theta_nodes, psi, field.domain_mask)


@dataclass(frozen=True)
class ComparisonReport:
    max_violation: float
    min_difference: float
    violation_nodes: tuple
    equality_case: bool
    tol: float
    w: np.ndarray = None
    w_model: np.ndarray = None


def compare_W(field, psi, rbar, region=None, tol=None):
    """Check W = |grad xi|^2 against the model gradient-square at Psi.

    The estimate asserts W <= W_model(Psi) with equality exactly on the
    model family; equality_case is set when |W - W_model| stays within
    the tolerance everywhere it is defined.
    """
    m = mf.model(rbar)
    g = jet_grid(field, one_sided=True)
    w = g["grad_norm"] ** 2
    with np.errstate(invalid="ignore"):
        wbar = mf.W_model(m, np.where(np.isnan(psi.values), 0.0, psi.values))
    wbar = np.where(np.isnan(psi.values), np.nan, wbar)
    valid = ~np.isnan(wbar) & ~np.isnan(w) & (field.domain_mask != OUTSIDE)
    if region is not None:
        valid &= region.node_mask
    diff = np.where(valid, w - wbar, np.nan)
    if tol is None:
        scale = float(np.nanmax(np.abs(wbar))) if np.any(valid) else 1.0
        tol = 40.0 * (field.dr**2 + field.dtheta**2) * scale
    viol = np.argwhere(valid & (diff > tol))
    return ComparisonReport(
        max_violation=float(np.nanmax(diff)),
        min_difference=float(np.nanmin(diff)),
        violation_nodes=tuple(map(tuple, viol)),
        equality_case=bool(np.nanmax(np.abs(diff)) <= tol),
        tol=float(tol),
        w=w, w_model=wbar,
    )


def p_function_check(field):
    """P = |grad xi|^2 + xi^2 and the minimum interior discrete Laplacian.

    For solutions of the PDE the continuous Laplacian of P is
    nonnegative; discretely it may dip to -C h^2.
    """
    g = jet_grid(field, one_sided=True)
    p_vals = g["grad_norm"] ** 2 + field.values**2
    p_field = ScalarField(field.r_nodes, field.theta_nodes, p_vals,
                          field.domain_mask)
    gp = jet_grid(p_field, one_sided=False)
    lap = gp["laplacian"]
    # rows 1 and -2 see the one-sided P values of the boundary rows; keep
    # only nodes whose whole stencil is built from centered derivatives
    interior = (field.domain_mask == INTERIOR).copy()
    interior[:2, :] = False
    interior[-2:, :] = False
    vals = lap[interior]
    return p_field, float(np.min(vals[~np.isnan(vals)]))


# ---------------------------------------------------------------------------
# Level-set extraction

@dataclass(frozen=True)
class LevelCurve:
    level: float
    curves: tuple          # tuple of (n, 2) arrays of (r, theta), closed
    lengths: tuple         # metric length per curve
    metric_length: float   # total
    kappa_samples: tuple   # tuple of arrays, one per curve


def _edge_point(field, kind, i, j, vminus):
    """Interpolated crossing point on a grid edge; vminus = values - t."""
    nt = field.theta_nodes.size
    if kind == "v":
        v0, v1 = vminus[i, j], vminus[i + 1, j]
        s = v0 / (v0 - v1)
        return (field.r_nodes[i] + s * field.dr, field.theta_nodes[j])
    j2 = (j + 1) % nt
    v0, v1 = vminus[i, j], vminus[i, j2]
    s = v0 / (v0 - v1)
    return (field.r_nodes[i], field.theta_nodes[j] + s * field.dtheta)


def _bilinear(field, arr, r, theta):
    """Periodic-in-theta bilinear interpolation of a grid array."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    fi = (r - field.r_nodes[0]) / field.dr
    i0 = np.clip(np.floor(fi).astype(int), 0, field.r_nodes.size - 2)
    wr = fi - i0
    ft = np.mod(theta, 2 * np.pi) / field.dtheta
    j0 = np.floor(ft).astype(int) % field.theta_nodes.size
    wt = ft - np.floor(ft)
    j1 = (j0 + 1) % field.theta_nodes.size
    return ((1 - wr) * (1 - wt) * arr[i0, j0] + (1 - wr) * wt * arr[i0, j1]
            + wr * (1 - wt) * arr[i0 + 1, j0] + wr * wt * arr[i0 + 1, j1])


def _metric_polyline_length(points):
    """Metric length of a closed (r, theta) polyline."""
    r = points[:, 0]
    th = points[:, 1]
    dr = np.diff(np.append(r, r[0]))
    dth = np.diff(np.append(th, th[0]))
    dth = np.mod(dth + np.pi, 2 * np.pi) - np.pi
    rm = 0.5 * (r + np.roll(r, -1))
    one = 1.0 - rm**2
    return float(np.sum(np.sqrt(dr**2 / one + one * dth**2)))


def level_extract(field, t, grad_floor=None):
    """Marching-squares extraction of the level set {xi = t}.

    Returns closed polylines in (r, theta), their metric lengths and the
    interpolated geodesic curvature per vertex (signed with respect to
    grad xi / |grad xi|).
    """
    v = field.values - t
    # boundary nodes carry the Dirichlet zero up to rounding; keep them on
    # the outside so the zero level reproduces the boundary exactly
    inside = (v > 0) & (field.domain_mask == INTERIOR)
    n_r, nt = field.shape
    segments = []
    for i in range(n_r - 1):
        row_a, row_b = inside[i], inside[i + 1]
        for j in range(nt):
            j2 = (j + 1) % nt
            a, b, c, d = row_a[j], row_b[j], row_b[j2], row_a[j2]
            code = (a << 3) | (b << 2) | (c << 1) | d
            if code in (0, 15):
                continue
            left = ("v", i, j)
            right = ("v", i, j2)
            bottom = ("h", i, j)
            top = ("h", i + 1, j)
            # pair crossing edges; corner order a=(i,j) b=(i+1,j) c=(i+1,j2) d=(i,j2)
            table = {
                0b1000: [(left, bottom)], 0b0111: [(left, bottom)],
                0b0100: [(left, top)], 0b1011: [(left, top)],
                0b0010: [(top, right)], 0b1101: [(top, right)],
                0b0001: [(bottom, right)], 0b1110: [(bottom, right)],
                0b1100: [(bottom, top)], 0b0011: [(bottom, top)],
                0b1001: [(left, right)], 0b0110: [(left, right)],
            }
            if code in table:
                segments.extend(table[code])
            else:
                # saddle: decide by the cell-center average
                center = 0.25 * (v[i, j] + v[i + 1, j] + v[i + 1, j2] + v[i, j2])
                if (code == 0b1010) == (center > 0):
                    segments.append((left, top))
                    segments.append((bottom, right))
                else:
                    segments.append((left, bottom))
                    segments.append((top, right))
    if not segments:
        raise EmptyLevel(f"level {t} does not intersect the grid")

    adj = {}
    for a, b in segments:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    visited = set()
    curves, lengths, kappas = [], [], []
    g = jet_grid(field, one_sided=True)
    floor = (grad_floor if grad_floor is not None
             else CURVATURE_GRAD_FLOOR * float(np.ptp(field.values)))
    kappa_arr = level_curvature_arrays(g, floor)
    for start in adj:
        if start in visited:
            continue
        loop = [start]
        visited.add(start)
        prev, cur = None, start
        while True:
            nxts = [e for e in adj[cur] if e != prev]
            if not nxts:
                break
            nxt = nxts[0]
            if nxt == start:
                break
            loop.append(nxt)
            visited.add(nxt)
            prev, cur = cur, nxt
        pts = np.array([_edge_point(field, *e, v) for e in loop])
        gn = _bilinear(field, g["grad_norm"], pts[:, 0], pts[:, 1])
        if np.min(gn) < floor:
            raise DegenerateLevel(
                f"|grad| falls below the floor along level {t}")
        curves.append(pts)
        lengths.append(_metric_polyline_length(pts))
        kappas.append(_bilinear(field, kappa_arr, pts[:, 0], pts[:, 1]))
    return LevelCurve(level=float(t), curves=tuple(curves),
                      lengths=tuple(lengths),
                      metric_length=float(sum(lengths)),
                      kappa_samples=tuple(kappas))


def _filter_curves(level_curve, field, region):
    """Keep the polylines whose vertices lie in the region."""
    keep_c, keep_l, keep_k = [], [], []
    for pts, ln, ks in zip(level_curve.curves, level_curve.lengths,
                           level_curve.kappa_samples):
        i = np.clip(np.rint((pts[:, 0] - field.r_nodes[0]) / field.dr).astype(int),
                    0, field.shape[0] - 1)
        j = np.rint(pts[:, 1] / field.dtheta).astype(int) % field.shape[1]
        if np.mean(region.node_mask[i, j]) > 0.5:
            keep_c.append(pts)
            keep_l.append(ln)
            keep_k.append(ks)
    return LevelCurve(level=level_curve.level, curves=tuple(keep_c),
                      lengths=tuple(keep_l), metric_length=float(sum(keep_l)),
                      kappa_samples=tuple(keep_k))


# ---------------------------------------------------------------------------
# Energy

def energy_profile(field, t_grid, region=None):
    """E(t) = (integral of |grad xi| over {xi = t}) / (xi_max^2 - t^2).

    Returns (ts, es, skipped): levels too close to the critical value
    xi_max are skipped and reported separately.
    """
    xi_max = float(np.max(field.values))
    band = max_band_width(field)
    g = jet_grid(field, one_sided=True)
    ts, es, skipped = [], [], []
    for t in np.asarray(t_grid, dtype=float):
        if xi_max - t <= 10.0 * band:
            skipped.append((float(t), "critical-value neighborhood"))
            continue
        try:
            lc = level_extract(field, t)
        except (EmptyLevel, DegenerateLevel) as exc:
            skipped.append((float(t), str(exc)))
            continue
        if region is not None:
            lc = _filter_curves(lc, field, region)
        total = 0.0
        for pts in lc.curves:
            r, th = pts[:, 0], pts[:, 1]
            rn, thn = np.roll(r, -1), np.roll(th, -1)
            dth = np.mod(thn - th + np.pi, 2 * np.pi) - np.pi
            rm, thm = 0.5 * (r + rn), th + 0.5 * dth
            one = 1.0 - rm**2
            seg = np.sqrt((rn - r) ** 2 / one + one * dth**2)
            gn = _bilinear(field, g["grad_norm"], rm, thm)
            total += float(np.sum(seg * gn))
        es.append(total / (xi_max**2 - t**2))
        ts.append(float(t))
    return np.array(ts), np.array(es), skipped


# ---------------------------------------------------------------------------
# Curvature and length bounds

@dataclass(frozen=True)
class RegionCurvature:
    tau: float
    expected_height: float
    branch: str
    kappa_boundary: float
    boundary_bound: float
    boundary_ok: bool
    kappa_top: float
    top_bound: float
    top_ok: bool


@dataclass(frozen=True)
class CurvatureBoundReport:
    regions: tuple
    heights_across_top: tuple  # expected heights of regions meeting the top curve
    ordering_ok: bool


def _top_kappa(field, region, band_lo, band_hi, xi_max):
    """Extrapolate the level-set kappa to the top curve.

    Linear fit in sqrt(xi_max - xi) over the band, evaluated at 0; the
    returned value is with respect to the region's inner orientation
    (minus the level-set limit, whose normal points toward the maximum).
    """
    sel = region.node_mask & (field.values >= band_lo) & (field.values <= band_hi)
    g = jet_grid(field, one_sided=True)
    floor = CURVATURE_GRAD_FLOOR * float(np.ptp(field.values))
    kap = level_curvature_arrays(g, floor)
    sel &= ~np.isnan(kap)
    if np.count_nonzero(sel) < 4:
        raise TopCurveNotFound("no usable nodes in the near-maximum band")
    x = np.sqrt(xi_max - field.values[sel])
    y = kap[sel]
    coeff = np.polynomial.polynomial.polyfit(x, y, 1)
    return -float(coeff[0])


def curvature_bound_report(field, report=None, slack=None):
    """Extremal geodesic curvatures versus the model bounds, per region.

    Boundary: kappa at the points maximizing |grad xi| on the attached
    boundary components must stay below -rbar_+/sqrt(1-rbar_+^2) on the
    '+' branch and below rbar_-/sqrt(1-rbar_-^2) on the '-' branch.  Top
    curve: kappa (inner orientation) below +/- Rbar/sqrt(1-Rbar^2).
    """
    if report is None:
        report = nwss(field)
    if not any(c.kind == "curve" for c in report.max_components):
        raise TopCurveNotFound("the maximum set has no curve stratum")
    if slack is None:
        slack = 30.0 * field.dr
    xi_max = report.xi_max
    band = max_band_width(field)
    g = jet_grid(field, one_sided=True)
    floor = CURVATURE_GRAD_FLOOR * float(np.ptp(field.values))
    kappa_arr = level_curvature_arrays(g, floor)

    out = []
    for region in report.regions:
        m = mf.model(region.expected_height)
        if region.branch == "+":
            bbound = -m.r_plus / np.sqrt(1.0 - m.r_plus**2)
            tbound = m.R / np.sqrt(1.0 - m.R**2)
        else:
            bbound = m.r_minus / np.sqrt(1.0 - m.r_minus**2)
            tbound = -m.R / np.sqrt(1.0 - m.R**2)
        kb = -np.inf
        for row in region.boundary_rows:
            gn = g["grad_norm"][row]
            # evaluate at every near-tie of the max and keep the worst case
            near = gn >= np.max(gn) * (1.0 - 1e-6)
            kb = max(kb, float(np.max(kappa_arr[row][near])))
        kt = _top_kappa(field, region, xi_max - 10.0 * band, xi_max - band,
                        xi_max)
        out.append(RegionCurvature(
            tau=region.tau, expected_height=region.expected_height,
            branch=region.branch,
            kappa_boundary=kb, boundary_bound=float(bbound),
            boundary_ok=bool(kb <= bbound + slack),
            kappa_top=kt, top_bound=float(tbound),
            top_ok=bool(kt <= tbound + slack),
        ))
    heights = tuple(rg.expected_height for rg in report.regions)
    ordering_ok = bool(len(heights) < 2 or max(heights) >= min(heights))
    return CurvatureBoundReport(regions=tuple(out),
                                heights_across_top=heights,
                                ordering_ok=ordering_ok)


def top_curve_length(field, region=None):
    """Metric length of the curve of maxima, O(h^2) accurate.

    Per theta column, the maximum location is taken as the vertex of the
    parabola through the top node and its neighbors; the resulting
    (r, theta) polyline is measured with the metric.
    """
    vals = field.values
    mask = field.domain_mask != OUTSIDE if region is None else region.node_mask
    n_r, nt = field.shape
    rs = np.empty(nt)
    for j in range(nt):
        col = np.where(mask[:, j], vals[:, j], -np.inf)
        i = int(np.argmax(col))
        if i <= 0 or i >= n_r - 1:
            raise TopCurveNotFound("columnwise maximum sits on the grid edge")
        y0, y1, y2 = vals[i - 1, j], vals[i, j], vals[i + 1, j]
        denom = y0 - 2.0 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        rs[j] = field.r_nodes[i] + shift * field.dr
    pts = np.column_stack([rs, field.theta_nodes])
    return _metric_polyline_length(pts), pts


@dataclass(frozen=True)
class LengthBoundResult:
    top_length: float
    boundary_length: float
    lhs: float
    rhs: float
    holds: bool
    branch: str


def length_bound_check(field, region, report=None, tol=None):
    """Check |gamma| / sqrt(1 - Rbar^2) <= |Gamma| / sqrt(1 - rbar^2).

    gamma is the region's top curve and Gamma its zero level set; the
    right-hand side uses r_plus or r_minus of the expected model per the
    region's branch.
    """
    if report is None:
        report = nwss(field)
    if not any(c.kind == "curve" for c in report.max_components):
        raise TopCurveNotFound("the maximum set has no curve stratum")
    m = mf.model(region.expected_height)
    rb = m.r_plus if region.branch == "+" else m.r_minus
    top_len, _ = top_curve_length(field)
    zero = _filter_curves(level_extract(field, 0.0), field, region)
    lhs = top_len / np.sqrt(1.0 - region.expected_height**2)
    rhs = zero.metric_length / np.sqrt(1.0 - rb**2)
    if tol is None:
        tol = 30.0 * field.dr**2 * max(lhs, rhs)
    return LengthBoundResult(
        top_length=float(top_len),
        boundary_length=float(zero.metric_length),
        lhs=float(lhs), rhs=float(rhs),
        holds=bool(lhs <= rhs + tol), branch=region.branch,
    )


# ---------------------------------------------------------------------------
# Crofton

def fibonacci_directions(n, seed=0):
    """Deterministic low-discrepancy direction set on the sphere.

    Fibonacci lattice with a seed-dependent longitude phase, so repeated
    calls with the same (n, seed) are bit-identical.
    """
    k = np.arange(n)
    z = 1.0 - (2.0 * k + 1.0) / n
    phase = float(np.random.default_rng(seed).uniform(0.0, 2.0 * np.pi))
    theta = 2.0 * np.pi * k / GOLDEN + phase
    rho = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])


def crofton_length(curve, n_planes=100000, seed=0):
    """Crofton estimate of the length of closed spherical polylines.

    Length = pi times the mean, over sampled great-circle normals a, of
    the number of sign changes of <vertex, a> around each polyline.
    """
    if isinstance(curve, LevelCurve):
        polylines = curve.curves
    elif isinstance(curve, np.ndarray):
        polylines = (curve,)
    else:
        polylines = tuple(curve)
    dirs = fibonacci_directions(n_planes, seed)
    total = 0.0
    for pts in polylines:
        xyz = embed_rt(pts[:, 0], pts[:, 1])
        if xyz.shape[0] < 3:
            raise OpenCurve("polyline too short to be closed")
        s = xyz @ dirs.T
        crossings = np.sum(s * np.roll(s, -1, axis=0) < 0, axis=0)
        total += np.pi * float(np.mean(crossings))
    return total


# ---------------------------------------------------------------------------
# Tables

def energy_csv(ts, es):
    lines = ["t,E"]
    lines += [f"{t:.17g},{e:.17g}" for t, e in zip(ts, es)]
    return "\n".join(lines) + "\n"


def comparison_csv(field, rep):
    lines = ["r,theta,W,W_model,violation"]
    for i, r in enumerate(field.r_nodes):
        for j, th in enumerate(field.theta_nodes):
            w = rep.w[i, j]
            wb = rep.w_model[i, j]
            viol = (i, j) in set(rep.violation_nodes)
            lines.append(f"{r:.17g},{th:.17g},{w:.17g},{wb:.17g},{int(viol)}")
    return "\n".join(lines) + "\n"
