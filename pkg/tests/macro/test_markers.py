"""Tests for blob markers, their velocity and time stepping."""

import numpy as np
import pytest

from SEDIMENTutils.exceptions import EmptyDensity, ValidationError
from SEDIMENTutils.kernels.oseen import oseen_apply
from SEDIMENTutils.macro.densities import AnalyticDensity
from SEDIMENTutils.macro.markers import (
    MarkerCloud,
    blob_velocity,
    init_markers,
    marker_velocities,
    step_macro,
)
from SEDIMENTutils.micro.pairwise import PairwiseEngine

DOWN = np.array([0.0, 0.0, -1.0])


def _single(kernel="stokeslet", blob=0.1, weight=1.0):
    return MarkerCloud(np.zeros((1, 3)), [weight], blob, xi_star=0.0, kernel=kernel)


def _divergence(cloud, x, step=1e-4):
    total = 0.0
    for axis in range(3):
        offset = np.zeros(3)
        offset[axis] = step
        total += (blob_velocity(cloud, x + offset)[axis] - blob_velocity(cloud, x - offset)[axis]) / (2 * step)
    return total


def test_uniform_ball_marker_mass():
    cloud = init_markers(AnalyticDensity("uniform_ball", radius=1.0), 0.1)
    assert cloud.mass == pytest.approx(4 * np.pi / 3, rel=0.05)
    assert cloud.blob_width == pytest.approx(0.2)
    assert np.all(cloud.weights == pytest.approx(1e-3))


def test_gaussian_marker_mass_converges():
    density = AnalyticDensity("gaussian", radius=0.5)
    coarse = abs(init_markers(density, 0.7).mass - density.mass())
    fine = abs(init_markers(density, 0.35).mass - density.mass())
    assert fine <= coarse / 4


def test_zero_amplitude_is_empty():
    with pytest.raises(EmptyDensity):
        init_markers(AnalyticDensity("gaussian", amplitude=0.0), 0.2)


def test_empty_cloud_moves_with_drift():
    cloud = MarkerCloud(np.zeros((0, 3)), [], 0.1, xi_star=1.5)
    np.testing.assert_allclose(blob_velocity(cloud, [1.0, 2.0, 3.0]), 0.5 * DOWN)


def test_far_field_is_bare_stokeslet():
    cloud = MarkerCloud(np.zeros((1, 3)), [1.0], 1e-4, xi_star=1.0)
    x = np.array([3.0, -4.0, 6.0])
    expected = oseen_apply(x, DOWN) + (2.0 / 9.0) * DOWN
    np.testing.assert_allclose(blob_velocity(cloud, x), expected, rtol=1e-8)


def test_ball_centre_velocity_matches_quadrature():
    cloud = init_markers(AnalyticDensity("uniform_ball", radius=1.0), 0.05)
    relative = blob_velocity(cloud, np.zeros(3)) - cloud.drift
    assert np.linalg.norm(relative - DOWN / 3.0) <= 0.02 / 3.0


@pytest.mark.parametrize("kernel, factor", [("stokeslet", 4.0), ("algebraic", 8.0)])
def test_self_velocity_of_lone_marker(kernel, factor):
    cloud = _single(kernel, blob=0.1, weight=2.0)
    expected = 2.0 * DOWN / (factor * np.pi * 0.1)
    np.testing.assert_allclose(marker_velocities(cloud)[0], expected, rtol=1e-14, atol=1e-16)


def test_velocity_is_linear_in_weights(mollified_ball):
    cloud = init_markers(mollified_ball, 0.25, xi_star=0.7)
    scaled = MarkerCloud(cloud.positions, 3.0 * cloud.weights, cloud.blob_width, xi_star=0.7)
    points = np.array([[0.1, 0.2, 0.3], [1.5, 0.0, -1.0]])
    np.testing.assert_allclose(
        blob_velocity(scaled, points) - scaled.drift,
        3.0 * (blob_velocity(cloud, points) - cloud.drift),
        rtol=1e-12,
        atol=1e-14,
    )


def test_regularized_stokeslet_is_divergence_free():
    x = np.array([0.05, 0.02, 0.03])
    assert abs(_divergence(_single("stokeslet"), x)) <= 1e-4
    assert abs(_divergence(_single("algebraic"), x)) > 1e-2


def test_algebraic_divergence_is_second_order_in_blob():
    x = np.array([0.6, 0.0, 0.8])
    ratio = _divergence(_single("algebraic", 0.1), x) / _divergence(_single("algebraic", 0.05), x)
    assert 3.6 < ratio < 4.4


def test_step_keeps_weights_and_moves_frame(mollified_ball):
    cloud = init_markers(mollified_ball, 0.3)
    moved = step_macro(cloud, 0.1)
    np.testing.assert_array_equal(moved.weights, cloud.weights)
    np.testing.assert_allclose(moved.frame_shift, 0.1 * cloud.drift)
    assert moved.time == pytest.approx(0.1)
    assert moved.center_of_mass()[2] < cloud.center_of_mass()[2]


def test_drift_only_changes_frame(mollified_ball):
    u0 = np.array([0.3, -0.2, 0.1])
    plain = init_markers(mollified_ball, 0.3)
    shifted = init_markers(mollified_ball, 0.3, extra_drift=u0)
    for _ in range(5):
        plain = step_macro(plain, 0.05)
        shifted = step_macro(shifted, 0.05)
    np.testing.assert_array_equal(shifted.positions, plain.positions)
    np.testing.assert_allclose(
        shifted.absolute_positions - plain.absolute_positions,
        np.broadcast_to(0.25 * u0, plain.positions.shape),
        atol=1e-12,
    )


def test_rk2_is_second_order():
    cloud = init_markers(AnalyticDensity("gaussian", radius=0.5), 0.5, xi_star=0.0)

    def advance(dt):
        current = cloud
        for _ in range(int(round(0.5 / dt))):
            current = step_macro(current, dt)
        return current.positions

    coarse, mid, fine = advance(0.25), advance(0.125), advance(0.0625)
    ratio = np.max(np.abs(coarse - mid)) / np.max(np.abs(mid - fine))
    assert ratio >= 3.0


def test_invalid_clouds():
    with pytest.raises(ValidationError):
        MarkerCloud(np.zeros((2, 3)), [1.0], 0.1)
    with pytest.raises(ValidationError):
        MarkerCloud(np.zeros((1, 3)), [-1.0], 0.1)
    with pytest.raises(ValidationError):
        MarkerCloud(np.zeros((1, 3)), [1.0], 0.1, kernel="gaussian")
    with pytest.raises(ValidationError):
        step_macro(_single(), 0.1, scheme="rk4")


@pytest.mark.parametrize("kernel", ["stokeslet", "algebraic"])
def test_compiled_blob_sum_matches_numpy(mollified_ball, kernel):
    compiled = init_markers(mollified_ball, 0.3, kernel=kernel)
    reference = init_markers(mollified_ball, 0.3, kernel=kernel, engine=PairwiseEngine(backend="numpy"))
    np.testing.assert_allclose(marker_velocities(compiled), marker_velocities(reference), rtol=1e-12, atol=1e-14)
    threaded = init_markers(mollified_ball, 0.3, kernel=kernel, engine=PairwiseEngine(workers=2))
    np.testing.assert_array_equal(marker_velocities(threaded), marker_velocities(compiled))
