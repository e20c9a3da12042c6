"""Tests for analytic initial densities."""

import numpy as np
import pytest

from SEDIMENTutils.exceptions import ValidationError
from SEDIMENTutils.macro.densities import AnalyticDensity, smooth_step
from SEDIMENTutils.schemas.validators import SYSTEM_MASS, DensitySpec


def _riemann_mass(density, spacing):
    reach = density.support_radius
    count = int(np.ceil(reach / spacing))
    axis = (np.arange(-count, count) + 0.5) * spacing
    points = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    return float(np.sum(density(points))) * spacing**3


def test_smooth_step_limits():
    np.testing.assert_array_equal(smooth_step([-1.0, 0.0, 1.0, 2.0]), [0.0, 0.0, 1.0, 1.0])
    assert smooth_step(0.5) == pytest.approx(0.5)
    values = smooth_step(np.linspace(0, 1, 50))
    assert np.all(np.diff(values) >= 0)


def test_uniform_ball_mass_and_profile():
    ball = AnalyticDensity("uniform_ball", radius=2.0, amplitude=3.0)
    assert ball.mass() == pytest.approx(3.0 * 4 * np.pi / 3 * 8.0)
    np.testing.assert_array_equal(ball([[0, 0, 1.9], [0, 0, 2.1]]), [3.0, 0.0])
    assert not ball.smooth


def test_mollified_ball_mass_matches_fine_sum():
    ball = AnalyticDensity("mollified_ball", radius=1.0)
    assert ball.smooth
    assert ball.support_radius == pytest.approx(1.2)
    assert _riemann_mass(ball, 0.02) == pytest.approx(ball.mass(), rel=1e-3)
    assert 4 * np.pi / 3 * 0.8**3 < ball.mass() < 4 * np.pi / 3 * 1.2**3


def test_gaussian_mass_closed_form():
    blob = AnalyticDensity("gaussian", radius=0.5, amplitude=2.0)
    assert _riemann_mass(blob, 0.1) == pytest.approx(blob.mass(), rel=1e-8)
    assert blob.support_radius == pytest.approx(3.0)


def test_normalized_rescales_amplitude():
    ball = AnalyticDensity("mollified_ball", radius=1.0).normalized(SYSTEM_MASS)
    assert ball.mass() == pytest.approx(SYSTEM_MASS, rel=1e-12)
    with pytest.raises(ValidationError):
        AnalyticDensity("gaussian", amplitude=0.0).normalized(1.0)


def test_offset_centre():
    blob = AnalyticDensity("gaussian", radius=1.0, center=[1.0, 2.0, 3.0])
    assert blob([1.0, 2.0, 3.0]) == pytest.approx(1.0)


def test_invalid_densities():
    with pytest.raises(ValidationError):
        AnalyticDensity("cube")
    with pytest.raises(ValidationError):
        AnalyticDensity("mollified_ball", radius=1.0, width=1.0)
    with pytest.raises(ValidationError):
        AnalyticDensity("gaussian", radius=0.0)


def test_density_spec_builds_normalized_density():
    density = DensitySpec(kind="gaussian", radius=0.4, normalize_mass=2.0).build()
    assert density.kind == "gaussian"
    assert density.mass() == pytest.approx(2.0)
    assert density.as_dict()["radius"] == 0.4
