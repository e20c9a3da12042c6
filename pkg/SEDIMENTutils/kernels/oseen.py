"""Oseen tensor (Stokeslet) and its derivatives in rescaled units (viscosity 1).

All ``*_apply`` helpers are vectorised: ``y`` has shape ``(..., 3)`` and
``force`` broadcasts against it (``(3,)`` or ``(..., 3)``).  Gradients are
returned as ``(..., 3, 3)`` arrays with ``[..., i, k] = d u_i / d y_k``.
"""

from __future__ import annotations

import numpy as np

from ..exceptions import ZeroSeparation

ZERO_SEPARATION_FLOOR = 1e-14
INV_EIGHT_PI = 1.0 / (8.0 * np.pi)
INV_FOUR_PI = 1.0 / (4.0 * np.pi)
_EYE = np.eye(3)


def separation(y: np.ndarray, floor: float = ZERO_SEPARATION_FLOOR) -> np.ndarray:
    """Return |y| along the last axis, refusing separations below ``floor``."""
    r = np.sqrt(np.einsum("...i,...i->...", y, y))
    if np.any(r < floor):
        raise ZeroSeparation(f"separation below floor {floor:g}")
    return r


def oseen_tensor(x, floor: float = ZERO_SEPARATION_FLOOR) -> np.ndarray:
    """Phi(x) = (1/8 pi)(I/|x| + x x^T/|x|^3); shape (..., 3, 3)."""
    x = np.asarray(x, dtype=float)
    r = separation(x, floor)[..., None, None]
    outer = x[..., :, None] * x[..., None, :]
    return INV_EIGHT_PI * (_EYE / r + outer / r**3)


def oseen_apply(y, force, floor: float = ZERO_SEPARATION_FLOOR) -> np.ndarray:
    """Phi(y) . F without materialising the tensor."""
    y = np.asarray(y, dtype=float)
    force = np.asarray(force, dtype=float)
    r = separation(y, floor)[..., None]
    y_dot_f = np.sum(y * force, axis=-1)[..., None]
    return INV_EIGHT_PI * (force / r + y * y_dot_f / r**3)


def oseen_gradient_apply(y, force, floor: float = ZERO_SEPARATION_FLOOR) -> np.ndarray:
    """Gradient of Phi(y) . F with respect to y."""
    y = np.asarray(y, dtype=float)
    force = np.asarray(force, dtype=float)
    r = separation(y, floor)[..., None, None]
    y_dot_f = np.sum(y * force, axis=-1)[..., None, None]
    f_y = force[..., :, None] * y[..., None, :]
    y_f = y[..., :, None] * force[..., None, :]
    y_y = y[..., :, None] * y[..., None, :]
    return INV_EIGHT_PI * ((-f_y + _EYE * y_dot_f + y_f) / r**3 - 3.0 * y_y * y_dot_f / r**5)


def oseen_laplacian_apply(y, force, floor: float = ZERO_SEPARATION_FLOOR) -> np.ndarray:
    """(Laplacian Phi)(y) . F = (1/4 pi)(F/r^3 - 3 y (y.F)/r^5); harmonic away from 0."""
    y = np.asarray(y, dtype=float)
    force = np.asarray(force, dtype=float)
    r = separation(y, floor)[..., None]
    y_dot_f = np.sum(y * force, axis=-1)[..., None]
    return INV_FOUR_PI * (force / r**3 - 3.0 * y * y_dot_f / r**5)


def oseen_laplacian_gradient_apply(y, force, floor: float = ZERO_SEPARATION_FLOOR) -> np.ndarray:
    """Gradient of (Laplacian Phi)(y) . F."""
    y = np.asarray(y, dtype=float)
    force = np.asarray(force, dtype=float)
    r = separation(y, floor)[..., None, None]
    y_dot_f = np.sum(y * force, axis=-1)[..., None, None]
    f_y = force[..., :, None] * y[..., None, :]
    y_f = y[..., :, None] * force[..., None, :]
    y_y = y[..., :, None] * y[..., None, :]
    return INV_FOUR_PI * (
        -3.0 * (f_y + _EYE * y_dot_f + y_f) / r**5 + 15.0 * y_y * y_dot_f / r**7
    )


# ---------------------------------------------------------------------------
# Regularised kernels for the blob method
# ---------------------------------------------------------------------------
def regularized_stokeslet_apply(y, force, blob: float) -> np.ndarray:
    """Regularised Stokeslet ((r^2 + 2 eps^2) F + (y.F) y) / (8 pi (r^2 + eps^2)^{3/2}).

    Exactly divergence-free for every eps and finite at y = 0, where it equals
    F / (4 pi eps).
    """
    y = np.asarray(y, dtype=float)
    force = np.asarray(force, dtype=float)
    r2 = np.einsum("...i,...i->...", y, y)[..., None]
    eps2 = blob * blob
    s3 = (r2 + eps2) ** 1.5
    y_dot_f = np.sum(y * force, axis=-1)[..., None]
    return INV_EIGHT_PI * ((r2 + 2.0 * eps2) * force + y * y_dot_f) / s3


def algebraic_blob_apply(y, force, blob: float) -> np.ndarray:
    """Oseen tensor with |y| replaced by sqrt(|y|^2 + eps^2) in both terms.

    Divergence is O(eps^2); at y = 0 the value is F / (8 pi eps).
    """
    y = np.asarray(y, dtype=float)
    force = np.asarray(force, dtype=float)
    s = np.sqrt(np.einsum("...i,...i->...", y, y) + blob * blob)[..., None]
    y_dot_f = np.sum(y * force, axis=-1)[..., None]
    return INV_EIGHT_PI * (force / s + y * y_dot_f / s**3)


BLOB_KERNELS = {
    "stokeslet": regularized_stokeslet_apply,
    "algebraic": algebraic_blob_apply,
}
