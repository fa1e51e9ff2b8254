"""Eigenfunction geometry on spherical annuli and catenoid validators."""

from . import errors
from .sphere_core import (
    SphericalPoint,
    MetricCoeffs,
    ScalarField,
    FirstSecondJet,
    metric_coeffs,
    embed_rt,
    frame_vectors,
    field_from_function,
    jet,
    jet_grid,
    level_curvature,
)
from .model_family import (
    FamilyConstants,
    ModelSolution,
    family_constants,
    model,
    xi_eval,
    tau_pm,
    invert_tau,
    chi_branch,
    W_model,
)

__version__ = "0.1.0"
