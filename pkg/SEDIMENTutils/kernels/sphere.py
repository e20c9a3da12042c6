"""Closed-form single-sphere Stokes solutions.

A sphere carries a monopole (total force F, spread uniformly over its
surface) and a linear coefficient A.  The A-part is the exterior flow whose
boundary trace is ``-A (x - c)``; it is assembled from a point source (trace
of A), a rotlet (antisymmetric part) and a stresslet plus potential
quadrupole (symmetric traceless part).  All pieces are biharmonic outside
the sphere, so surface means over a remote sphere of radius ``a`` are exact
as ``f + a^2/6 * Laplacian f`` evaluated at its centre.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..exceptions import InsideSphere, ValidationError
from ..utils import as_vec3, ensure_positive
from .oseen import (
    ZERO_SEPARATION_FLOOR,
    oseen_apply,
    oseen_gradient_apply,
    oseen_laplacian_apply,
    oseen_laplacian_gradient_apply,
    separation,
)

_EYE = np.eye(3)
# relative slack when deciding "strictly inside"
_INSIDE_TOLERANCE = 1e-12


def split_linear_coeff(coeff) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split A (..., 3, 3) into (trace part, antisymmetric part, symmetric traceless part)."""
    coeff = np.asarray(coeff, dtype=float)
    third_trace = np.trace(coeff, axis1=-2, axis2=-1)[..., None, None] / 3.0
    trace_part = third_trace * _EYE
    antisym = 0.5 * (coeff - np.swapaxes(coeff, -1, -2))
    strain = 0.5 * (coeff + np.swapaxes(coeff, -1, -2)) - trace_part
    return trace_part, antisym, strain


# ---------------------------------------------------------------------------
# Vectorised building blocks, y = x - centre with shape (..., 3)
# ---------------------------------------------------------------------------
def _parts(y, coeff):
    third_trace = np.trace(coeff, axis1=-2, axis2=-1) / 3.0
    _, antisym, strain = split_linear_coeff(coeff)
    strain_y = np.einsum("...ij,...j->...i", strain, y)
    rot_y = np.einsum("...ij,...j->...i", antisym, y)
    s = np.einsum("...i,...i->...", y, strain_y)
    return third_trace, antisym, strain, rot_y, strain_y, s


def correction_apply(y, coeff, radius: float, floor: float = ZERO_SEPARATION_FLOOR) -> np.ndarray:
    """Exterior field with boundary trace -A y on the sphere |y| = radius."""
    y = np.asarray(y, dtype=float)
    coeff = np.asarray(coeff, dtype=float)
    r = separation(y, floor)
    t, _, _, rot_y, strain_y, s = _parts(y, coeff)
    r_ = r[..., None]
    r3 = radius**3
    r5 = radius**5
    return (
        -r3 * t[..., None] * y / r_**3
        - r3 * rot_y / r_**3
        - r5 * strain_y / r_**5
        + 2.5 * r5 * y * s[..., None] / r_**7
        - 2.5 * r3 * y * s[..., None] / r_**5
    )


def _quadrupole_apply(y, strain_y, s, r):
    r_ = r[..., None]
    return strain_y / r_**5 - 2.5 * y * s[..., None] / r_**7


def correction_gradient_apply(
    y, coeff, radius: float, floor: float = ZERO_SEPARATION_FLOOR
) -> np.ndarray:
    """Gradient [..., i, k] of ``correction_apply`` with respect to y_k."""
    y = np.asarray(y, dtype=float)
    coeff = np.asarray(coeff, dtype=float)
    r = separation(y, floor)
    t, antisym, strain, rot_y, strain_y, s = _parts(y, coeff)
    r_ = r[..., None, None]
    s_ = s[..., None, None]
    y_y = y[..., :, None] * y[..., None, :]
    source = _EYE / r_**3 - 3.0 * y_y / r_**5
    rotlet = antisym / r_**3 - 3.0 * rot_y[..., :, None] * y[..., None, :] / r_**5
    y_ey = y[..., :, None] * strain_y[..., None, :]
    quad_a = strain / r_**5 - 5.0 * strain_y[..., :, None] * y[..., None, :] / r_**7
    quad_b = _EYE * s_ / r_**7 + 2.0 * y_ey / r_**7 - 7.0 * y_y * s_ / r_**9
    stresslet = _EYE * s_ / r_**5 + 2.0 * y_ey / r_**5 - 5.0 * y_y * s_ / r_**7
    r3 = radius**3
    r5 = radius**5
    return (
        -r3 * t[..., None, None] * source
        - r3 * rotlet
        - r5 * quad_a
        + 2.5 * r5 * quad_b
        - 2.5 * r3 * stresslet
    )


def correction_laplacian_apply(y, coeff, radius: float, floor: float = ZERO_SEPARATION_FLOOR):
    """Laplacian of ``correction_apply``: -10 R^3 Q(y), Q the potential quadrupole."""
    y = np.asarray(y, dtype=float)
    coeff = np.asarray(coeff, dtype=float)
    r = separation(y, floor)
    _, _, _, _, strain_y, s = _parts(y, coeff)
    return -10.0 * radius**3 * _quadrupole_apply(y, strain_y, s, r)


def correction_laplacian_gradient_apply(
    y, coeff, radius: float, floor: float = ZERO_SEPARATION_FLOOR
) -> np.ndarray:
    """Gradient of ``correction_laplacian_apply``."""
    y = np.asarray(y, dtype=float)
    coeff = np.asarray(coeff, dtype=float)
    r = separation(y, floor)
    _, _, strain, _, strain_y, s = _parts(y, coeff)
    r_ = r[..., None, None]
    s_ = s[..., None, None]
    y_y = y[..., :, None] * y[..., None, :]
    y_ey = y[..., :, None] * strain_y[..., None, :]
    quad_a = strain / r_**5 - 5.0 * strain_y[..., :, None] * y[..., None, :] / r_**7
    quad_b = _EYE * s_ / r_**7 + 2.0 * y_ey / r_**7 - 7.0 * y_y * s_ / r_**9
    return -10.0 * radius**3 * (quad_a - 2.5 * quad_b)


# ---------------------------------------------------------------------------
# Single-sphere fields
# ---------------------------------------------------------------------------
def translating_sphere_field(center, radius: float, force, x) -> np.ndarray:
    """Field of a uniform surface force ``force`` on the sphere (no-slip translating sphere).

    Inside (|x - c| <= R) the value is F / (6 pi R); outside it is
    (1 + R^2/6 Laplacian) Phi(x - c) F.
    """
    ensure_positive("radius", radius)
    center = as_vec3("center", center)
    force = as_vec3("force", force)
    x = np.asarray(x, dtype=float)
    y = x - center
    r = np.sqrt(np.einsum("...i,...i->...", y, y))
    out = np.empty(y.shape, dtype=float)
    inside = r <= radius
    out[inside] = force / (6.0 * np.pi * radius)
    outside = ~inside
    if np.any(outside):
        yo = y[outside]
        out[outside] = oseen_apply(yo, force) + radius**2 / 6.0 * oseen_laplacian_apply(yo, force)
    return out


def _check_exterior(y, radius):
    r = np.sqrt(np.einsum("...i,...i->...", y, y))
    if np.any(r < radius * (1.0 - _INSIDE_TOLERANCE)):
        raise InsideSphere(f"exterior field evaluated inside sphere of radius {radius:g}")


@dataclass(frozen=True)
class PointForce:
    """Bare Stokeslet of strength ``force`` located at ``center``."""

    center: np.ndarray
    force: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec3("center", self.center))
        object.__setattr__(self, "force", as_vec3("force", self.force))

    def __call__(self, x) -> np.ndarray:
        return oseen_apply(np.asarray(x, dtype=float) - self.center, self.force)

    def faxen_mean(self, center, radius: float) -> np.ndarray:
        y = as_vec3("center", center) - self.center
        if np.linalg.norm(y) <= radius:
            raise InsideSphere("point force lies inside the averaging sphere")
        return oseen_apply(y, self.force) + radius**2 / 6.0 * oseen_laplacian_apply(y, self.force)

    def faxen_gradient(self, center, radius: float) -> np.ndarray:
        y = as_vec3("center", center) - self.center
        if np.linalg.norm(y) <= radius:
            raise InsideSphere("point force lies inside the averaging sphere")
        return oseen_gradient_apply(y, self.force) + radius**2 / 6.0 * oseen_laplacian_gradient_apply(
            y, self.force
        )


@dataclass(frozen=True)
class SphereSingularity:
    """Singularity set carried by one rigid sphere."""

    center: np.ndarray
    radius: float
    monopole: np.ndarray
    linear_coeff: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))

    def __post_init__(self):
        if not self.radius or self.radius <= 0:
            raise ValidationError(f"radius must be positive, got {self.radius}")
        coeff = np.asarray(self.linear_coeff, dtype=float)
        if coeff.shape != (3, 3) or not np.all(np.isfinite(coeff)):
            raise ValidationError("linear_coeff must be a finite 3x3 matrix")
        object.__setattr__(self, "center", as_vec3("center", self.center))
        object.__setattr__(self, "monopole", as_vec3("monopole", self.monopole))
        object.__setattr__(self, "linear_coeff", coeff)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def has_linear_part(self) -> bool:
        return bool(np.any(self.linear_coeff))

    def __call__(self, x) -> np.ndarray:
        """Total exterior field (translating sphere plus linear correction)."""
        total = translating_sphere_field(self.center, self.radius, self.monopole, x)
        if self.has_linear_part:
            total = total + linear_correction_field(self, x)
        return total

    def faxen_mean(self, center, radius: float) -> np.ndarray:
        """Exact surface mean of this sphere's field over a disjoint sphere."""
        y = self._remote_offset(center, radius)
        coef = (self.radius**2 + radius**2) / 6.0
        mean = oseen_apply(y, self.monopole) + coef * oseen_laplacian_apply(y, self.monopole)
        if self.has_linear_part:
            mean = mean + correction_apply(y, self.linear_coeff, self.radius)
            mean = mean + radius**2 / 6.0 * correction_laplacian_apply(y, self.linear_coeff, self.radius)
        return mean

    def faxen_gradient(self, center, radius: float) -> np.ndarray:
        """Exact surface mean of the gradient over a disjoint sphere."""
        y = self._remote_offset(center, radius)
        coef = (self.radius**2 + radius**2) / 6.0
        grad = oseen_gradient_apply(y, self.monopole) + coef * oseen_laplacian_gradient_apply(
            y, self.monopole
        )
        if self.has_linear_part:
            grad = grad + correction_gradient_apply(y, self.linear_coeff, self.radius)
            grad = grad + radius**2 / 6.0 * correction_laplacian_gradient_apply(
                y, self.linear_coeff, self.radius
            )
        return grad

    def _remote_offset(self, center, radius: float) -> np.ndarray:
        y = as_vec3("center", center) - self.center
        if np.linalg.norm(y) < self.radius + radius:
            raise InsideSphere("averaging sphere overlaps the singularity's sphere")
        return y


def linear_correction_field(sing: SphereSingularity, x) -> np.ndarray:
    """Exterior Stokes flow with trace ``-linear_coeff (x - center)`` on the sphere.

    Force-free; decays like 1/r^2 (stresslet) or faster.
    """
    y = np.asarray(x, dtype=float) - sing.center
    _check_exterior(y, sing.radius)
    return correction_apply(y, sing.linear_coeff, sing.radius)
