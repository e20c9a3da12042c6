"""Weighted sup norms ||h||_X_beta = sup (1 + |x|^beta) |h(x)|."""

from __future__ import annotations

import numpy as np

from ..exceptions import ValidationError
from ..utils import as_points, ensure_nonnegative
from .grid import DensityGrid

# sample lattice for callables without explicit points: spacing 0.1 on [-3, 3]^3
DEFAULT_SAMPLE_HALF_WIDTH = 3.0
DEFAULT_SAMPLE_SPACING = 0.1


def default_sample_points(
    half_width: float = DEFAULT_SAMPLE_HALF_WIDTH, spacing: float = DEFAULT_SAMPLE_SPACING
) -> np.ndarray:
    count = int(round(2 * half_width / spacing)) + 1
    axis = np.linspace(-half_width, half_width, count)
    return np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)


def _weight(points: np.ndarray, beta: float) -> np.ndarray:
    return 1.0 + np.linalg.norm(points, axis=1) ** beta


def _weighted_sup(points: np.ndarray, values: np.ndarray, beta: float) -> float:
    if values.size == 0:
        return 0.0
    return float(np.max(_weight(points, beta) * np.abs(values)))


def x_beta_norm(field, beta: float, points=None) -> float:
    """Sup over cube centres (grids) or sample points (callables)."""
    beta = ensure_nonnegative("beta", beta)
    if isinstance(field, DensityGrid):
        return _weighted_sup(field.centers(), field.values, beta)
    if not callable(field):
        raise ValidationError(f"cannot take X_beta norm of {type(field).__name__}")
    points = default_sample_points() if points is None else as_points("points", points)
    return _weighted_sup(points, np.asarray(field(points), dtype=float).reshape(-1), beta)


def covering_indices(density: DensityGrid, reference=None) -> np.ndarray:
    """All cube indices of the block covering the grid's support and the reference's support."""
    lo = []
    hi = []
    if density.indices.shape[0]:
        lo.append(density.indices.min(axis=0))
        hi.append(density.indices.max(axis=0))
    if reference is not None and hasattr(reference, "support_radius"):
        reach = reference.support_radius
        corners = np.stack([reference.center - reach, reference.center + reach])
        idx = density.grid.index_of(corners)
        lo.append(idx[0])
        hi.append(idx[1])
    if not lo:
        return np.zeros((0, 3), dtype=np.int64)
    lo = np.min(lo, axis=0)
    hi = np.max(hi, axis=0)
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)


def _children(indices: np.ndarray, factor: int, offset: np.ndarray) -> np.ndarray:
    """Fine-grid indices of every child cube of the given coarse cubes."""
    local = np.arange(factor)
    block = np.stack(np.meshgrid(local, local, local, indexing="ij"), axis=-1).reshape(-1, 3)
    return (indices[:, None, :] * factor + block[None] - offset).reshape(-1, 3)


def _grid_distance(a: DensityGrid, b: DensityGrid, beta: float) -> float:
    if a.delta < b.delta:
        a, b = b, a
    # a is now the coarser grid; both are compared as piecewise constants on b's cubes
    factor = a.grid.refinement_factor(b.grid)
    offset = np.round((b.grid.anchor - a.grid.anchor) / b.delta).astype(np.int64)
    if factor == 1 and not np.any(offset):
        union = np.unique(np.concatenate([a.indices, b.indices]), axis=0)
        return _weighted_sup(a.grid.centers(union), a.lookup(union) - b.lookup(union), beta)
    fine = np.unique(np.concatenate([b.indices, _children(a.indices, factor, offset)]), axis=0)
    diff = b.lookup(fine) - a.lookup(np.floor_divide(fine + offset, factor))
    return _weighted_sup(b.grid.centers(fine), diff, beta)


def x_beta_distance(a, b, beta: float, points=None) -> float:
    """X_beta norm of a - b.

    Two grids must be nested; the coarser one is read as a piecewise
    constant on the finer cubes.
    An analytic reference is evaluated at the cube centres of the block
    covering both supports.
    """
    beta = ensure_nonnegative("beta", beta)
    if isinstance(a, DensityGrid) and isinstance(b, DensityGrid):
        return _grid_distance(a, b, beta)
    if not isinstance(a, DensityGrid) and isinstance(b, DensityGrid):
        a, b = b, a
    if isinstance(a, DensityGrid):
        if not callable(b):
            raise ValidationError(f"cannot compare a grid with {type(b).__name__}")
        indices = covering_indices(a, b)
        centers = a.grid.centers(indices)
        diff = a.lookup(indices) - np.asarray(b(centers), dtype=float).reshape(-1)
        return _weighted_sup(centers, diff, beta)
    points = default_sample_points() if points is None else as_points("points", points)
    diff = np.asarray(a(points), dtype=float).reshape(-1) - np.asarray(b(points), dtype=float).reshape(-1)
    return _weighted_sup(points, diff, beta)
