"""Dense boundary-collocation solver for small rigid-sphere mobility problems.

The exterior flow is represented by Stokeslets on a smaller concentric
sphere inside every particle (method of fundamental solutions).  Unknowns
are the Stokeslet strengths and the particle velocities; rows impose
u = V_p at collocation nodes on each surface and the prescribed total force
per particle.  Particles translate without rotating, matching the reflection
solver's boundary condition.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy import linalg

from ..exceptions import InsideSphere, ValidationError
from ..kernels.oseen import oseen_tensor
from ..kernels.quadrature import sphere_design
from ..utils import as_points, ensure_positive
from .diagnostics import min_distance

logger = logging.getLogger(__name__)

SOURCE_COUNT = 150
SOURCE_RADIUS_RATIO = 0.6
COLLOCATION_POLAR = 10
COLLOCATION_AZIMUTH = 20
FORCE_ROW_WEIGHT = 1e3


def fibonacci_sphere(count: int) -> np.ndarray:
    """Near-uniform unit vectors on the sphere."""
    idx = np.arange(count) + 0.5
    z = 1.0 - 2.0 * idx / count
    rho = np.sqrt(1.0 - z * z)
    phi = np.pi * (3.0 - np.sqrt(5.0)) * idx
    return np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)


def collocation_mobility(
    positions,
    radius: float,
    forces,
    n_sources: int = SOURCE_COUNT,
    source_ratio: float = SOURCE_RADIUS_RATIO,
) -> np.ndarray:
    """Velocities (P, 3) of rigid, non-rotating spheres with given total forces."""
    centers = as_points("positions", positions)
    radius = ensure_positive("radius", radius)
    forces = np.broadcast_to(np.asarray(forces, dtype=float), centers.shape)
    if not 0.0 < source_ratio < 1.0:
        raise ValidationError(f"source_ratio must lie in (0, 1), got {source_ratio}")
    if min_distance(centers) <= 2.0 * radius:
        raise InsideSphere("collocation spheres overlap")

    count = centers.shape[0]
    nodes, _ = sphere_design(COLLOCATION_POLAR, COLLOCATION_AZIMUTH)
    boundary = (centers[:, None, :] + radius * nodes[None]).reshape(-1, 3)
    sources = (centers[:, None, :] + source_ratio * radius * fibonacci_sphere(n_sources)[None]).reshape(-1, 3)
    n_boundary = boundary.shape[0]
    n_src = sources.shape[0]

    kernel = oseen_tensor(boundary[:, None, :] - sources[None, :, :])
    kernel = kernel.transpose(0, 2, 1, 3).reshape(3 * n_boundary, 3 * n_src)

    # -V_p on the rows of particle p's nodes
    velocity_block = np.zeros((3 * n_boundary, 3 * count))
    per_particle = nodes.shape[0]
    for p in range(count):
        rows = slice(3 * p * per_particle, 3 * (p + 1) * per_particle)
        velocity_block[rows, 3 * p : 3 * p + 3] = -np.tile(np.eye(3), (per_particle, 1))

    force_rows = np.zeros((3 * count, 3 * n_src + 3 * count))
    for p in range(count):
        cols = np.arange(3 * p * n_sources, 3 * (p + 1) * n_sources)
        force_rows[3 * p : 3 * p + 3, cols] = np.tile(np.eye(3), (1, n_sources))
    force_rows *= FORCE_ROW_WEIGHT

    matrix = np.vstack([np.hstack([kernel, velocity_block]), force_rows])
    rhs = np.concatenate([np.zeros(3 * n_boundary), FORCE_ROW_WEIGHT * forces.ravel()])
    solution, _, rank, _ = linalg.lstsq(matrix, rhs)
    logger.debug("collocation system %s, rank %d", matrix.shape, rank)
    return solution[3 * n_src :].reshape(count, 3)
