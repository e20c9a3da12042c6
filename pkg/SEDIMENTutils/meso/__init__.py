"""Cube-averaged densities, X_beta norms and the mesoscale velocity."""

from .grid import CubeGrid, DensityGrid, coarsen, cube_average, deposit
from .norms import covering_indices, default_sample_points, x_beta_distance, x_beta_norm
from .velocity import mesoscale_velocity

__all__ = [
    "CubeGrid",
    "DensityGrid",
    "coarsen",
    "covering_indices",
    "cube_average",
    "default_sample_points",
    "deposit",
    "mesoscale_velocity",
    "x_beta_distance",
    "x_beta_norm",
]
