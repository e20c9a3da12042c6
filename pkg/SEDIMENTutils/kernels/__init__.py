"""Closed-form Stokes flow building blocks."""

from .oseen import (
    BLOB_KERNELS,
    ZERO_SEPARATION_FLOOR,
    algebraic_blob_apply,
    oseen_apply,
    oseen_gradient_apply,
    oseen_laplacian_apply,
    oseen_laplacian_gradient_apply,
    oseen_tensor,
    regularized_stokeslet_apply,
)
from .quadrature import (
    SPHERE_NODES,
    SPHERE_WEIGHTS,
    faxen_surface_average,
    faxen_surface_gradient,
    sphere_design,
    surface_points,
)
from .sphere import (
    PointForce,
    SphereSingularity,
    linear_correction_field,
    split_linear_coeff,
    translating_sphere_field,
)

__all__ = [
    "BLOB_KERNELS",
    "PointForce",
    "SPHERE_NODES",
    "SPHERE_WEIGHTS",
    "SphereSingularity",
    "ZERO_SEPARATION_FLOOR",
    "algebraic_blob_apply",
    "faxen_surface_average",
    "faxen_surface_gradient",
    "linear_correction_field",
    "oseen_apply",
    "oseen_gradient_apply",
    "oseen_laplacian_apply",
    "oseen_laplacian_gradient_apply",
    "oseen_tensor",
    "regularized_stokeslet_apply",
    "sphere_design",
    "split_linear_coeff",
    "surface_points",
    "translating_sphere_field",
]
