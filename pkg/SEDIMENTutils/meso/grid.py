"""Sparse cube grids and cube-averaged densities."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import DegenerateDelta, IncompatibleGrids, ValidationError
from ..utils import as_points, as_vec3, ensure_positive

logger = logging.getLogger(__name__)

# relative slack when testing that delta ratios and anchor offsets are integers
NESTING_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CubeGrid:
    """Axis-aligned cubes [anchor + k delta, anchor + (k + 1) delta)."""

    delta: float
    anchor: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "delta", ensure_positive("delta", self.delta))
        object.__setattr__(self, "anchor", as_vec3("anchor", self.anchor))

    def index_of(self, points) -> np.ndarray:
        points = as_points("points", points)
        return np.floor((points - self.anchor) / self.delta).astype(np.int64)

    def centers(self, indices) -> np.ndarray:
        return self.anchor + (np.asarray(indices, dtype=float) + 0.5) * self.delta

    def refinement_factor(self, finer: "CubeGrid") -> int:
        """Integer n with self.delta = n * finer.delta and aligned anchors, else IncompatibleGrids."""
        ratio = self.delta / finer.delta
        factor = int(round(ratio))
        offset = (self.anchor - finer.anchor) / finer.delta
        if (
            factor < 1
            or abs(ratio - factor) > NESTING_TOLERANCE * ratio
            or np.any(np.abs(offset - np.round(offset)) > NESTING_TOLERANCE * max(1.0, ratio))
        ):
            raise IncompatibleGrids(
                f"grid delta={self.delta:g} is not nested over delta={finer.delta:g}"
            )
        return factor

    def as_dict(self) -> dict:
        return {"delta": self.delta, "anchor": self.anchor.tolist()}


@dataclass(frozen=True)
class DensityGrid:
    """Occupied cubes only: lexicographically sorted unique ``indices`` (M, 3) and ``values`` (M,)."""

    grid: CubeGrid
    indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=np.int64).reshape(-1, 3)
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if indices.shape[0] != values.shape[0]:
            raise ValidationError("indices and values must have the same length")
        if np.any(values < 0) or not np.all(np.isfinite(values)):
            raise ValidationError("density values must be finite and non-negative")
        if indices.shape[0] > 1:
            order = np.lexsort(indices.T[::-1])
            indices, values = indices[order], values[order]
            if np.any(np.all(indices[1:] == indices[:-1], axis=1)):
                raise ValidationError("duplicate cube indices")
        indices.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_masses(cls, grid: CubeGrid, indices, masses) -> "DensityGrid":
        """Accumulate masses per cube index and divide by the cube volume."""
        indices = np.asarray(indices, dtype=np.int64).reshape(-1, 3)
        masses = np.asarray(masses, dtype=float).reshape(-1)
        if indices.shape[0] == 0:
            return cls(grid, indices, masses)
        unique, inverse = np.unique(indices, axis=0, return_inverse=True)
        totals = np.bincount(inverse.reshape(-1), weights=masses, minlength=unique.shape[0])
        return cls(grid, unique, totals / grid.delta**3)

    @property
    def delta(self) -> float:
        return self.grid.delta

    @property
    def extents(self) -> tuple[tuple[int, int], ...]:
        if self.indices.shape[0] == 0:
            return ((0, -1),) * 3
        lo = self.indices.min(axis=0)
        hi = self.indices.max(axis=0)
        return tuple((int(a), int(b)) for a, b in zip(lo, hi))

    def centers(self) -> np.ndarray:
        return self.grid.centers(self.indices)

    def masses(self) -> np.ndarray:
        return self.values * self.delta**3

    def mass(self) -> float:
        return float(np.sum(self.masses()))

    def lookup(self, indices) -> np.ndarray:
        """Values at arbitrary cube indices (0 for unoccupied cubes)."""
        query = np.asarray(indices, dtype=np.int64).reshape(-1, 3)
        out = np.zeros(query.shape[0])
        if self.indices.shape[0] == 0 or query.shape[0] == 0:
            return out
        lo = np.minimum(self.indices.min(axis=0), query.min(axis=0))
        hi = np.maximum(self.indices.max(axis=0), query.max(axis=0))
        dims = tuple(int(v) for v in hi - lo + 1)
        keys = np.ravel_multi_index(tuple((self.indices - lo).T), dims)
        wanted = np.ravel_multi_index(tuple((query - lo).T), dims)
        pos = np.searchsorted(keys, wanted)
        pos = np.clip(pos, 0, keys.shape[0] - 1)
        hit = keys[pos] == wanted
        out[hit] = self.values[pos[hit]]
        return out

    def value_at(self, points) -> np.ndarray:
        return self.lookup(self.grid.index_of(points))

    def scaled(self, factor: float) -> "DensityGrid":
        return DensityGrid(self.grid, self.indices, self.values * factor)


def deposit(points, weights, delta: float, anchor=None) -> DensityGrid:
    """Centre-rule deposition: each weight goes to the cube containing its point."""
    grid = CubeGrid(delta, np.zeros(3) if anchor is None else anchor)
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    weights = np.broadcast_to(np.asarray(weights, dtype=float), (points.shape[0],))
    if points.shape[0] == 0:
        return DensityGrid(grid, np.zeros((0, 3), dtype=np.int64), np.zeros(0))
    return DensityGrid.from_masses(grid, grid.index_of(points), weights)


def cube_average(system, delta: float, anchor=None) -> DensityGrid:
    """Cube-averaged rescaled density; every particle carries mass (4 pi / 3) / N."""
    delta = ensure_positive("delta", delta)
    if delta <= 2.0 * system.radius:
        raise DegenerateDelta(f"delta={delta:g} must exceed the particle diameter {2 * system.radius:g}")
    if math.isfinite(system.d_min) and delta < system.d_min:
        logger.warning("delta=%g is below d_min=%g; cube averages will be spiky", delta, system.d_min)
    return deposit(system.positions, 4.0 * np.pi / (3.0 * system.count), delta, anchor)


def coarsen(density: DensityGrid, factor: int) -> DensityGrid:
    """Merge factor^3 child cubes into each parent; mass is conserved."""
    if not isinstance(factor, (int, np.integer)) or factor < 1:
        raise ValidationError(f"factor must be a positive integer, got {factor}")
    if factor == 1:
        return density
    parent = CubeGrid(density.delta * factor, density.grid.anchor)
    return DensityGrid.from_masses(parent, np.floor_divide(density.indices, factor), density.masses())
