"""Shared validation helpers used across the numerical packages."""

from __future__ import annotations

import math

import numpy as np

from .exceptions import ValidationError


def ensure_positive(name: str, value: float) -> float:
    """Ensure value is a finite positive number, raising ValidationError otherwise."""
    if value is None or not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be positive, got {value}")
    return float(value)


def ensure_nonnegative(name: str, value: float) -> float:
    """Ensure value is finite and >= 0."""
    if value is None or not math.isfinite(value) or value < 0:
        raise ValidationError(f"{name} must be non-negative, got {value}")
    return float(value)


def as_vec3(name: str, value) -> np.ndarray:
    """Return value as a finite float array of shape (3,)."""
    try:
        arr = np.asarray(value, dtype=float).reshape(3)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} must be a 3-vector, got {value!r}") from exc
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must have finite components, got {arr}")
    return arr


def as_points(name: str, value) -> np.ndarray:
    """Return value as a finite float array of shape (n, 3)."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 1 and arr.shape[0] == 3:
        arr = arr.reshape(1, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValidationError(f"{name} must have shape (n, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} must have finite components")
    return arr
