"""Tests for the Oseen tensor and the regularised blob kernels."""

import numpy as np
import pytest

from SEDIMENTutils.exceptions import ZeroSeparation
from SEDIMENTutils.kernels.oseen import (
    algebraic_blob_apply,
    oseen_apply,
    oseen_gradient_apply,
    oseen_laplacian_apply,
    oseen_laplacian_gradient_apply,
    oseen_tensor,
    regularized_stokeslet_apply,
)

FORCE = np.array([0.3, -1.2, 0.7])


def _finite_gradient(fn, y, step=1e-6):
    grad = np.empty((3, 3))
    for k in range(3):
        shift = np.zeros(3)
        shift[k] = step
        grad[:, k] = (fn(y + shift) - fn(y - shift)) / (2 * step)
    return grad


def test_oseen_tensor_on_axis():
    expected = np.diag([2.0, 1.0, 1.0]) / (8 * np.pi)
    np.testing.assert_allclose(oseen_tensor([1.0, 0.0, 0.0]), expected, rtol=1e-15)


def test_oseen_tensor_even_and_homogeneous():
    x = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(oseen_tensor(x), oseen_tensor(-x), rtol=1e-15)
    np.testing.assert_allclose(oseen_tensor(2 * x), oseen_tensor(x) / 2, rtol=1e-14)


def test_oseen_apply_matches_tensor_product():
    y = np.array([[0.4, -0.2, 1.1], [2.0, 0.5, -0.3]])
    expected = np.einsum("nij,j->ni", oseen_tensor(y), FORCE)
    np.testing.assert_allclose(oseen_apply(y, FORCE), expected, rtol=1e-14)


def test_zero_separation_raises():
    with pytest.raises(ZeroSeparation):
        oseen_tensor(np.zeros(3))
    with pytest.raises(ZeroSeparation):
        oseen_apply(np.zeros((2, 3)), FORCE)


def test_oseen_field_is_divergence_free():
    y = np.array([0.7, -0.4, 0.9])
    grad = _finite_gradient(lambda p: oseen_apply(p, FORCE), y)
    assert abs(np.trace(grad)) < 1e-8


def test_gradients_match_finite_differences():
    y = np.array([0.7, -0.4, 0.9])
    np.testing.assert_allclose(
        oseen_gradient_apply(y, FORCE), _finite_gradient(lambda p: oseen_apply(p, FORCE), y), atol=1e-8
    )
    np.testing.assert_allclose(
        oseen_laplacian_gradient_apply(y, FORCE),
        _finite_gradient(lambda p: oseen_laplacian_apply(p, FORCE), y),
        atol=1e-7,
    )


def test_laplacian_matches_second_differences():
    y = np.array([0.7, -0.4, 0.9])
    step = 1e-3
    lap = -6 * oseen_apply(y, FORCE)
    for k in range(3):
        shift = np.zeros(3)
        shift[k] = step
        lap = lap + oseen_apply(y + shift, FORCE) + oseen_apply(y - shift, FORCE)
    np.testing.assert_allclose(oseen_laplacian_apply(y, FORCE), lap / step**2, rtol=1e-4)


def test_regularized_stokeslet_at_origin_and_far_field():
    eps = 0.05
    np.testing.assert_allclose(regularized_stokeslet_apply(np.zeros(3), FORCE, eps), FORCE / (4 * np.pi * eps))
    y = np.array([3.0, -1.0, 2.0])
    far = regularized_stokeslet_apply(y, FORCE, eps)
    bare = oseen_apply(y, FORCE)
    assert np.linalg.norm(far - bare) <= 3 * (eps**2 / np.dot(y, y)) * np.linalg.norm(bare)


def test_regularized_stokeslet_is_divergence_free():
    y = np.array([0.02, 0.01, -0.03])
    grad = _finite_gradient(lambda p: regularized_stokeslet_apply(p, FORCE, 0.05), y, step=1e-7)
    assert abs(np.trace(grad)) < 1e-6


def test_algebraic_blob_at_origin():
    eps = 0.1
    np.testing.assert_allclose(algebraic_blob_apply(np.zeros(3), FORCE, eps), FORCE / (8 * np.pi * eps))


def test_blob_kernels_broadcast_over_pairs():
    y = np.random.default_rng(1).normal(size=(4, 5, 3))
    forces = np.ones((1, 5, 3))
    assert regularized_stokeslet_apply(y, forces, 0.1).shape == (4, 5, 3)
    assert algebraic_blob_apply(y, forces, 0.1).shape == (4, 5, 3)
