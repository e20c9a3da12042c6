"""Shared pytest fixtures for sediment_lab."""

import numpy as np
import pytest

from SEDIMENTutils.macro.densities import AnalyticDensity
from SEDIMENTutils.micro.system import ParticleSystem, generate_configuration
from SEDIMENTutils.schemas.validators import SYSTEM_MASS


def make_pair(distance_in_radii: float, xi: float = 1.0, axis=(0.0, 0.0, 1.0)) -> ParticleSystem:
    """Two spheres of radius 1/(2 xi^2) separated along ``axis``."""
    radius = 1.0 / (2.0 * xi * xi)
    offset = distance_in_radii * radius * np.asarray(axis, dtype=float)
    return ParticleSystem(np.array([np.zeros(3), offset]), radius)


def random_linear_coeffs(rng, count: int) -> np.ndarray:
    return rng.normal(size=(count, 3, 3))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def lattice_system():
    """Seeded jittered lattice, N=64, c0=0.1."""
    return generate_configuration(64, 0.1, seed=3)


@pytest.fixture(scope="session")
def lattice_512():
    return generate_configuration(512, 0.1, seed=7)


@pytest.fixture
def single_particle():
    return generate_configuration(1, 0.1, seed=0)


@pytest.fixture
def mollified_ball():
    return AnalyticDensity("mollified_ball", radius=1.0).normalized(SYSTEM_MASS)


@pytest.fixture
def coarse_ball_density():
    return AnalyticDensity("uniform_ball", radius=1.0, amplitude=1.0)
