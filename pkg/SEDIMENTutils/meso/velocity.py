"""Mesoscale velocity w = Phi * (rho^delta e) + (2/9) xi^2 e."""

from __future__ import annotations

import numpy as np

from ..kernels.oseen import oseen_apply
from ..micro.system import DEFAULT_DRIVE
from ..utils import as_points, as_vec3, ensure_nonnegative
from .grid import DensityGrid

SUBDIVISIONS = 3
# query points per chunk of the dense point x cube sum
POINT_CHUNK = 256
_SELF_PLACEHOLDER = np.array([1.0, 0.0, 0.0])


def _sub_offsets(delta: float) -> np.ndarray:
    step = delta / SUBDIVISIONS
    axis = (np.arange(SUBDIVISIONS) + 0.5) * step - 0.5 * delta
    return np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)


def _self_cube(points, cube_centers, cube_values, delta, drive) -> np.ndarray:
    """Contribution of the cube containing each point, integrated on 3^3 sub-cells.

    The sub-cell holding the point is replaced by a ball of equal volume
    centred there, whose kernel integral is (a^2 / 3) I.
    """
    step = delta / SUBDIVISIONS
    ball_radius = (3.0 / (4.0 * np.pi)) ** (1.0 / 3.0) * step
    offsets = _sub_offsets(delta)
    sub_centers = cube_centers[:, None, :] + offsets[None]
    y = points[:, None, :] - sub_centers
    containing = np.all(np.abs(y) <= 0.5 * step, axis=-1)
    # points on shared faces belong to the first matching sub-cell only
    first = np.argmax(containing, axis=1)
    mask = np.ones(y.shape[:2])
    rows = np.arange(points.shape[0])
    mask[rows, first] = 0.0
    y[rows, first] = _SELF_PLACEHOLDER
    sub_mass = cube_values * step**3
    far = oseen_apply(y, drive) * (mask * sub_mass[:, None])[..., None]
    near = (cube_values * ball_radius**2 / 3.0)[:, None] * drive
    return far.sum(axis=1) + near


def mesoscale_velocity(density: DensityGrid, xi: float, x, drive=DEFAULT_DRIVE) -> np.ndarray:
    """Evaluate w at one point (3,) or many points (M, 3)."""
    xi = ensure_nonnegative("xi", xi)
    drive = as_vec3("drive", drive)
    single = np.asarray(x).ndim == 1
    points = as_points("x", x)
    out = np.tile((2.0 / 9.0) * xi * xi * drive, (points.shape[0], 1))
    if density.indices.shape[0] == 0:
        return out[0] if single else out

    centers = density.centers()
    masses = density.masses()
    own_index = density.grid.index_of(points)
    own_value = density.lookup(own_index)
    for start in range(0, points.shape[0], POINT_CHUNK):
        stop = min(start + POINT_CHUNK, points.shape[0])
        chunk = points[start:stop]
        same = np.all(own_index[start:stop, None, :] == density.indices[None], axis=-1)
        y = chunk[:, None, :] - centers[None]
        y[same] = _SELF_PLACEHOLDER
        weights = np.where(same, 0.0, masses[None, :])
        out[start:stop] += np.sum(oseen_apply(y, drive) * weights[..., None], axis=1)
        rows = np.arange(start, stop)[own_value[start:stop] > 0]
        if rows.size:
            out[rows] += _self_cube(
                points[rows],
                density.grid.centers(own_index[rows]),
                own_value[rows],
                density.delta,
                drive,
            )
    return out[0] if single else out
