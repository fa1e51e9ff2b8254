"""Closed-form rotationally symmetric solutions of  Delta xi + 2 xi = 0.

The axisymmetric solutions on the sphere are

    xi(r) = alpha * (1 - r*arctanh(r) + omega*r),

positive between its two zeros r_minus < 0 < r_plus and maximal at the
height R where  omega = arctanh(R) + R/(1-R^2).  The scale is fixed to
alpha = r_plus*sqrt(1-r_plus^2), which puts the upper boundary circle of
the corresponding catenoid on the unit sphere and makes |grad xi| = 1
along the upper zero circle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import OutOfDomain, ParameterOutOfRange, ValueOutOfRange, DegeneratePsi
from .sphere_core import FirstSecondJet, ScalarField, POLE_CLEARANCE, field_from_function

# Absolute tolerance on root residuals of the implicit equation.
ROOT_TOL = 1e-12

# Largest height parameter for which r_plus is resolvable in float64
# (beyond it, 1 - r_plus underflows the bracket; see r_plus_of).
R_SUP = 0.93


@dataclass(frozen=True)
class FamilyConstants:
    """r_bar: zero of 1 - r*arctanh(r); tau0: critical boundary stress."""

    r_bar: float
    tau0: float


@dataclass(frozen=True)
class ModelSolution:
    R: float
    r_minus: float
    r_plus: float
    alpha: float
    omega: float
    xi_max: float


def _implicit(r, omega):
    return 1.0 - r * np.arctanh(r) + omega * r


@lru_cache(maxsize=1)
def family_constants():
    """Bisection root of 1 - r*arctanh(r) on [0.8, 0.99] and tau0."""
    r_bar = brentq(lambda r: 1.0 - r * np.arctanh(r), 0.8, 0.99,
                   xtol=1e-15, rtol=8.9e-16)
    tau0 = 1.0 / (r_bar * np.sqrt(1.0 - r_bar**2))
    return FamilyConstants(r_bar=float(r_bar), tau0=float(tau0))


def omega_of(R):
    """Tilt parameter fixing the height of the maximum."""
    return float(np.arctanh(R) + R / (1.0 - R * R))


def r_plus_of(omega, R=0.0):
    """Upper zero of 1 - r*arctanh(r) + omega*r in (0, 1)."""
    fc = family_constants()
    lo = max(R, fc.r_bar * 1e-3)
    hi = 1.0 - POLE_CLEARANCE
    if _implicit(hi, omega) > 0.0:
        raise ParameterOutOfRange(
            f"upper zero for omega={omega} lies within {POLE_CLEARANCE} of the "
            f"pole and cannot be resolved in double precision (R <= {R_SUP})")
    return float(brentq(_implicit, lo, hi, args=(omega,), xtol=1e-15, rtol=8.9e-16))


def r_minus_of(omega):
    """Lower zero of 1 - r*arctanh(r) + omega*r in (-1, 0)."""
    lo = -1.0 + POLE_CLEARANCE
    hi = -1e-12
    return float(brentq(_implicit, lo, hi, args=(omega,), xtol=1e-15, rtol=8.9e-16))


def model(R):
    """Model solution with maximum on the parallel at height R."""
    if not 0.0 <= R < 1.0:
        raise ParameterOutOfRange(f"R must lie in [0, 1), got {R}")
    om = omega_of(R)
    rp = r_plus_of(om, R)
    rm = r_minus_of(om)
    alpha = rp * np.sqrt(1.0 - rp * rp)
    return ModelSolution(R=float(R), r_minus=rm, r_plus=rp, alpha=float(alpha),
                         omega=om, xi_max=float(alpha / (1.0 - R * R)))


def xi_value(m, r, scale=1.0):
    """xi(r) = alpha*(1 - r*arctanh(r) + omega*r), optionally rescaled."""
    r = np.asarray(r, dtype=float)
    return scale * m.alpha * _implicit(r, m.omega)


def xi_dr(m, r, scale=1.0):
    """d(xi)/dr = alpha*(omega - arctanh(r) - r/(1-r^2)); smooth at r = 0."""
    r = np.asarray(r, dtype=float)
    return scale * m.alpha * (m.omega - np.arctanh(r) - r / (1.0 - r * r))


def grad_norm(m, r, scale=1.0):
    """|grad xi|(r) = sqrt(1-r^2) * |d(xi)/dr|."""
    r = np.asarray(r, dtype=float)
    return np.sqrt(1.0 - r * r) * np.abs(xi_dr(m, r, scale))


def xi_eval(m, r, scale=1.0):
    """Closed-form jet of the model profile at height r.

    The frame Hessian is diag(-xi - a, -xi + a) with a = alpha/(1-r^2).
    """
    if not m.r_minus - 1e-12 <= r <= m.r_plus + 1e-12:
        raise OutOfDomain(f"r={r} outside [{m.r_minus}, {m.r_plus}]")
    r = float(np.clip(r, m.r_minus, m.r_plus))
    val = float(xi_value(m, r, scale))
    a = scale * m.alpha / (1.0 - r * r)
    gn = float(np.sqrt(1.0 - r * r) * xi_dr(m, r, scale))
    return FirstSecondJet(value=val, grad_n=gn, grad_t=0.0,
                          hess_nn=-val - a, hess_nt=0.0, hess_tt=-val + a)


def dr_dR(m, branch):
    """Closed-form derivative of the zeros with respect to R; positive."""
    rb = m.r_plus if branch == "+" else m.r_minus
    return 2.0 * rb * rb * (1.0 - rb * rb) / (1.0 - m.R * m.R) ** 2


def tau_pm(m, branch):
    """Normalized boundary gradient max |grad xi| / xi_max of one component."""
    if branch == "+":
        return (1.0 - m.R**2) / (m.r_plus * np.sqrt(1.0 - m.r_plus**2))
    return -(1.0 - m.R**2) / (m.r_minus * np.sqrt(1.0 - m.r_minus**2))


def _tau_plus_R(R):
    om = omega_of(R)
    rp = r_plus_of(om, R)
    return (1.0 - R * R) / (rp * np.sqrt(1.0 - rp * rp))


def _tau_minus_R(R):
    om = omega_of(R)
    rm = r_minus_of(om)
    return -(1.0 - R * R) / (rm * np.sqrt(1.0 - rm * rm))


def invert_tau(tau):
    """Expected critical height: invert the monotone branch hit by tau.

    tau <= 1 maps to the disk case (height 1); values in (1, tau0) invert
    the decreasing minus branch, values >= tau0 the increasing plus branch.
    """
    if tau < 0.0:
        raise ValueOutOfRange(f"tau must be nonnegative, got {tau}")
    fc = family_constants()
    # the minus branch flattens to 1 + O((1-R^2) log(1/(1-R))); values in
    # that unresolvable tail are folded into the disk case
    if tau <= 1.0 + 1e-6:
        return 1.0
    if abs(tau - fc.tau0) < 1e-14:
        return 0.0
    if tau < fc.tau0:
        # tau_minus is decreasing from tau0 to 1
        return float(brentq(lambda R: _tau_minus_R(R) - tau,
                            0.0, 1.0 - 1e-9, xtol=1e-12))
    hi = R_SUP
    if _tau_plus_R(hi) < tau:
        raise ValueOutOfRange(
            f"tau={tau} beyond the resolvable range of the plus branch")
    return float(brentq(lambda R: _tau_plus_R(R) - tau, 0.0, hi, xtol=1e-12))


def chi_branch(m, xi_target, branch, scale=1.0):
    """Invert the profile on a monotone branch: xi(chi) = xi_target.

    branch '+' returns heights in [R, r_plus] (profile decreasing),
    branch '-' heights in [r_minus, R] (profile increasing).  Accepts
    scalars or arrays; unconditional vectorized bisection.
    """
    target = np.asarray(xi_target, dtype=float) / scale
    if np.any(target < -1e-12) or np.any(target > m.xi_max + 1e-12):
        raise ValueOutOfRange("xi values outside [0, xi_max]")
    target = np.clip(target, 0.0, m.xi_max)
    if branch == "+":
        lo = np.full(target.shape, m.R)
        hi = np.full(target.shape, m.r_plus)
    elif branch == "-":
        lo = np.full(target.shape, m.r_minus)
        hi = np.full(target.shape, m.R)
    else:
        raise ValueError(f"branch must be '+' or '-', got {branch!r}")
    # profile value decreases from lo to hi on '+', increases on '-'
    sign = 1.0 if branch == "+" else -1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        f = sign * (m.alpha * _implicit(mid, m.omega) - target)
        take_lo = f >= 0.0
        lo = np.where(take_lo, mid, lo)
        hi = np.where(take_lo, hi, mid)
    out = 0.5 * (lo + hi)
    return float(out) if np.ndim(xi_target) == 0 else out


def W_model(m, psi, scale=1.0):
    """Model gradient-square |grad xi|^2 at pseudo-radius psi.

    Evaluated as (1-psi^2)*(d xi/dr)^2 with the smooth closed-form
    derivative, which is identical to the ratio form away from psi = 0 and
    stays finite through it.
    """
    psi = np.asarray(psi, dtype=float)
    if np.any(np.abs(psi) > 1.0):
        raise DegeneratePsi("pseudo-radius outside [-1, 1]")
    w = (1.0 - psi * psi) * xi_dr(m, psi, scale) ** 2
    return float(w) if w.ndim == 0 else w


def sample_field(m, n_r, n_theta, scale=1.0):
    """Sample the model profile on a uniform grid over [r_minus, r_plus]."""
    return field_from_function(
        lambda r, th: xi_value(m, r, scale), m.r_minus, m.r_plus, n_r, n_theta)


def boundary_gradient_ratio(m):
    """|grad xi| along the lower zero circle (it is 1 along the upper one)."""
    num = m.r_plus * np.sqrt(1.0 - m.r_plus**2)
    den = m.r_minus * np.sqrt(1.0 - m.r_minus**2)
    return abs(num / den)
