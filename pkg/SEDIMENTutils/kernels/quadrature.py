"""Faxen-type surface averages over spheres.

Fields that know their own closed form (``PointForce``, ``SphereSingularity``)
expose ``faxen_mean`` / ``faxen_gradient`` and are averaged exactly.  Any
other callable is averaged with a fixed product rule: 5 Gauss-Legendre
nodes in cos(theta) times 10 equispaced azimuths (50 nodes), exact for
spherical polynomials up to degree 9.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np

from ..exceptions import QuadratureFailure, ValidationError
from ..utils import as_vec3, ensure_positive

DEFAULT_POLAR_NODES = 5
DEFAULT_AZIMUTH_NODES = 10
# relative step of the centre finite difference used for generic gradients
GRADIENT_STEP = 1e-4


@lru_cache(maxsize=None)
def sphere_design(n_polar: int = DEFAULT_POLAR_NODES, n_azimuth: int = DEFAULT_AZIMUTH_NODES):
    """Return (unit nodes (n, 3), weights (n,)) of the product rule; weights sum to 1."""
    if n_polar < 1 or n_azimuth < 1:
        raise ValidationError("node counts must be positive")
    cos_theta, w_polar = np.polynomial.legendre.leggauss(n_polar)
    sin_theta = np.sqrt(1.0 - cos_theta**2)
    phi = (np.arange(n_azimuth) + 0.5) * (2.0 * np.pi / n_azimuth)
    nodes = np.stack(
        [
            np.outer(sin_theta, np.cos(phi)).ravel(),
            np.outer(sin_theta, np.sin(phi)).ravel(),
            np.repeat(cos_theta, n_azimuth),
        ],
        axis=1,
    )
    weights = np.repeat(w_polar / 2.0, n_azimuth) / n_azimuth
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


SPHERE_NODES, SPHERE_WEIGHTS = sphere_design()


def surface_points(center, radius: float, nodes: np.ndarray = SPHERE_NODES) -> np.ndarray:
    """Quadrature nodes scaled onto the sphere |x - center| = radius."""
    return as_vec3("center", center) + radius * nodes


def faxen_surface_average(field, center, radius: float) -> np.ndarray:
    """Surface mean of ``field`` over the sphere of given centre and radius."""
    ensure_positive("radius", radius)
    center = as_vec3("center", center)
    if hasattr(field, "faxen_mean"):
        return np.asarray(field.faxen_mean(center, radius), dtype=float)
    return _quadrature_mean(field, center, radius)


def faxen_surface_gradient(field, center, radius: float) -> np.ndarray:
    """Surface mean of the gradient of ``field``, ``[i, k] = d u_i / d x_k``.

    The mean of a gradient equals the gradient of the mean with respect to the
    centre; generic callables use a central difference of the quadrature mean.
    """
    ensure_positive("radius", radius)
    center = as_vec3("center", center)
    if hasattr(field, "faxen_gradient"):
        return np.asarray(field.faxen_gradient(center, radius), dtype=float)
    step = GRADIENT_STEP * radius
    grad = np.empty((3, 3))
    for k in range(3):
        shift = np.zeros(3)
        shift[k] = step
        plus = _quadrature_mean(field, center + shift, radius)
        minus = _quadrature_mean(field, center - shift, radius)
        grad[:, k] = (plus - minus) / (2.0 * step)
    return grad


def _quadrature_mean(field: Callable, center: np.ndarray, radius: float) -> np.ndarray:
    points = surface_points(center, radius)
    values = np.empty_like(points)
    for idx, point in enumerate(points):
        try:
            values[idx] = np.asarray(field(point), dtype=float).reshape(3)
        except Exception as exc:
            raise QuadratureFailure(f"field evaluation failed at node {idx} ({point})") from exc
    if not np.all(np.isfinite(values)):
        raise QuadratureFailure("field returned non-finite values on the sphere")
    return SPHERE_WEIGHTS @ values
