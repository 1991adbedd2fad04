"""Isotropic Gaussian random fields on the sphere by latitude marching."""

from ._sgrf import (
    FieldSample,
    FilterBank,
    LatitudeGrid,
    PowerSpectrum,
    Sampler,
    SgrfError,
    analytic_covariance,
    build_grid,
    convergence_study,
    cross_covariance,
    jmatrix,
    load_bank,
    load_field,
    precompute,
    required_l_max,
)

__all__ = [
    "FieldSample",
    "FilterBank",
    "LatitudeGrid",
    "PowerSpectrum",
    "Sampler",
    "SgrfError",
    "analytic_covariance",
    "build_grid",
    "convergence_study",
    "cross_covariance",
    "jmatrix",
    "load_bank",
    "load_field",
    "precompute",
    "required_l_max",
]
