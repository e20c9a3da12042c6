"""Tests for X_beta norms and distances."""

import numpy as np
import pytest

from SEDIMENTutils.exceptions import IncompatibleGrids, ValidationError
from SEDIMENTutils.macro.densities import AnalyticDensity
from SEDIMENTutils.meso.grid import CubeGrid, DensityGrid, coarsen, cube_average, deposit
from SEDIMENTutils.meso.norms import default_sample_points, x_beta_distance, x_beta_norm


def _random_grid(rng, count=40, delta=0.25):
    indices = np.unique(rng.integers(-6, 6, size=(count, 3)), axis=0)
    return DensityGrid(CubeGrid(delta), indices, rng.uniform(0, 2, size=indices.shape[0]))


def test_reciprocal_weight_has_unit_norm():
    beta = 3.0
    field = lambda x: 1.0 / (1.0 + np.linalg.norm(x, axis=1) ** beta)
    assert x_beta_norm(field, beta) == pytest.approx(1.0, rel=1e-12)


def test_zero_fields_have_zero_norm():
    empty = DensityGrid(CubeGrid(1.0), np.zeros((0, 3)), np.zeros(0))
    assert x_beta_norm(empty, 3.0) == 0.0
    assert x_beta_norm(lambda x: np.zeros(len(x)), 3.0) == 0.0


def test_grid_norm_matches_brute_force_scan(rng):
    grid = _random_grid(rng)
    beta = 2.5
    best = 0.0
    for index, value in zip(grid.indices, grid.values):
        center = (index + 0.5) * grid.delta
        best = max(best, (1 + np.linalg.norm(center) ** beta) * value)
    assert x_beta_norm(grid, beta) == pytest.approx(best, rel=1e-14)


def test_norm_is_homogeneous_and_subadditive(rng):
    for _ in range(20):
        a = _random_grid(rng)
        b = DensityGrid(a.grid, a.indices, rng.uniform(0, 2, size=a.values.shape[0]))
        total = DensityGrid(a.grid, a.indices, a.values + b.values)
        assert x_beta_norm(a.scaled(2.5), 3.0) == pytest.approx(2.5 * x_beta_norm(a, 3.0), rel=1e-12)
        assert x_beta_norm(total, 3.0) <= x_beta_norm(a, 3.0) + x_beta_norm(b, 3.0) * (1 + 1e-12)


def test_distance_to_self_is_zero(lattice_system, mollified_ball):
    grid = cube_average(lattice_system, 0.3)
    assert x_beta_distance(grid, grid, 3.0) == 0.0
    assert x_beta_distance(mollified_ball, mollified_ball, 3.0) == 0.0


def test_distance_between_nested_levels(lattice_system, mollified_ball):
    fine = cube_average(lattice_system, 0.2)
    coarse = coarsen(fine, 2)
    assert x_beta_distance(coarse, coarse, 3.0) == 0.0
    gap = x_beta_distance(fine, coarse, 3.0)
    assert np.isfinite(gap) and gap > 0
    assert x_beta_distance(fine, coarse, 3.0) == x_beta_distance(coarse, fine, 3.0)
    reference = x_beta_distance(coarse, mollified_ball, 3.0)
    assert np.isfinite(reference) and reference >= 0
    assert x_beta_distance(mollified_ball, coarse, 3.0) == reference


def test_non_nested_grids_are_incompatible(lattice_system):
    with pytest.raises(IncompatibleGrids):
        x_beta_distance(cube_average(lattice_system, 0.2), cube_average(lattice_system, 0.3), 3.0)


def test_cube_averages_approach_smooth_reference():
    # edges well below the length scale of the profile: error ~ delta^2
    reference = AnalyticDensity("gaussian", radius=0.5)
    distances = []
    for delta in (0.4, 0.2, 0.1):
        sub = delta / 2.0
        count = int(round(3.2 / sub))
        axis = (np.arange(-count, count) + 0.5) * sub
        points = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
        grid = deposit(points, reference(points) * sub**3, delta)
        distances.append(x_beta_distance(grid, reference, 3.0))
    assert distances[0] > 2.0 * distances[1] > 4.0 * distances[2]


def test_analytic_distance_uses_sample_points():
    a = AnalyticDensity("gaussian", radius=0.5)
    b = AnalyticDensity("gaussian", radius=0.5, amplitude=0.5)
    points = default_sample_points(1.0, 0.5)
    assert x_beta_distance(a, b, 0.0, points=points) == pytest.approx(1.0)


def test_negative_beta_and_bad_inputs(lattice_system):
    grid = cube_average(lattice_system, 0.3)
    with pytest.raises(ValidationError):
        x_beta_norm(grid, -1.0)
    with pytest.raises(ValidationError):
        x_beta_norm("grid", 3.0)
    with pytest.raises(ValidationError):
        x_beta_distance(grid, 3, 3.0)
