"""Boundary statistics, pseudo-radial comparison and the P-function.

Given any candidate solution field, the normalized boundary gradient tau
identifies the family member to compare against.  The comparison is
pointwise: invert the model profile at each node (the pseudo-radius Psi)
and check the gradient square against the model's.  On family members
the inequality is an equality up to discretization error.
"""

import numpy as np

import sphereigen.comparison as cp
import sphereigen.model_family as mf
from sphereigen.sphere_core import field_from_function

f = mf.sample_field(mf.model(0.5), 513, 32)

# --- identify the field from its boundary data ---------------------------
rep = cp.nwss(f)
print("max-set components:", [c.kind for c in rep.max_components])
for rg in rep.regions:
    print(f"  region branch {rg.branch}: tau = {rg.tau:.6f}"
          f"  expected height = {rg.expected_height:.6f}")
print()

# --- pointwise gradient comparison ---------------------------------------
for rg in rep.regions:
    nf, m = cp.normalize_field(f, rg.expected_height)
    psi = cp.pseudo_radial(nf, rg.expected_height, rg.branch, rg)
    w = cp.compare_W(nf, psi, rg.expected_height, rg)
    print(f"branch {rg.branch}: equality within tol {w.tol:.2e}?"
          f" {w.equality_case}  (max violation {w.max_violation:.2e})")
print()

# --- P-function: a subharmonic combination of gradient and value ---------
# P = |grad xi|^2 + xi^2 has nonnegative Laplacian for solutions; its
# discrete interior minimum stays positive on family members.
p_field, min_lap = cp.p_function_check(f)
print(f"min interior Laplacian of P = {min_lap:.4f}  (>= 0 up to O(h^2))")
print()

# --- energy along level sets ---------------------------------------------
# E(t) integrates |grad xi| over the level {xi = t}, normalized by
# xi_max^2 - t^2.  On the hemisphere with the height function it is the
# constant 2 pi; in general it is non-increasing in t.
hemi = field_from_function(lambda r, th: r, 0.0, 1.0 - 1e-9, 513, 16,
                           upper_boundary=False)
ts, energies, skipped = cp.energy_profile(hemi, np.linspace(0.0, 0.9, 10))
print("hemisphere energy profile (exact value 2 pi = %.6f):" % (2 * np.pi))
for t, e in zip(ts, energies):
    print(f"  t = {t:.2f}  E = {e:.6f}")
if skipped:
    print("skipped levels:", skipped)
