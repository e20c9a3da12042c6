"""Micro/macro comparison of cube-averaged densities in the X_beta norm."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import SkewTooLarge, ValidationError
from ..meso.grid import DensityGrid, cube_average, deposit
from ..meso.norms import x_beta_distance
from ..micro.system import ParticleSystem
from ..utils import ensure_nonnegative, ensure_positive

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ComparisonSeries:
    """Per-time X_beta distances between two snapshot series."""

    times: np.ndarray
    distances: np.ndarray
    skews: np.ndarray
    beta: float

    @property
    def sup(self) -> float:
        return float(np.max(self.distances)) if self.distances.size else 0.0

    @property
    def initial(self) -> float:
        return float(self.distances[0]) if self.distances.size else 0.0

    def rows(self) -> list[dict]:
        return [
            {"t": float(t), "distance": float(d), "skew": float(s)}
            for t, d, s in zip(self.times, self.distances, self.skews)
        ]


def _as_series(snapshots) -> list[tuple[float, DensityGrid]]:
    series = []
    for item in snapshots:
        if isinstance(item, tuple):
            t, grid = item
        else:
            t, grid = item.t, item.density
        if not isinstance(grid, DensityGrid):
            raise ValidationError(f"snapshot at t={t} carries no density grid")
        series.append((float(t), grid))
    return series


def compare_snapshots(a, b, beta: float, max_skew: float) -> ComparisonSeries:
    """Distance at every time of ``a`` against the nearest snapshot of ``b``.

    Snapshots are ``(t, DensityGrid)`` pairs or objects with ``t`` and
    ``density``. No interpolation: a match further than ``max_skew`` away
    raises SkewTooLarge.
    """
    beta = ensure_nonnegative("beta", beta)
    max_skew = ensure_nonnegative("max_skew", max_skew)
    left = _as_series(a)
    right = _as_series(b)
    if not left or not right:
        raise ValidationError("both snapshot series must be non-empty")
    right_times = np.array([t for t, _ in right])

    times, distances, skews = [], [], []
    for t, grid in left:
        j = int(np.argmin(np.abs(right_times - t)))
        skew = abs(right_times[j] - t)
        if skew > max_skew * (1 + 1e-9):
            raise SkewTooLarge(f"nearest snapshot to t={t:.6g} is {skew:.3e} away (max {max_skew:.3e})")
        times.append(t)
        distances.append(x_beta_distance(grid, right[j][1], beta))
        skews.append(skew)
    return ComparisonSeries(np.array(times), np.array(distances), np.array(skews), beta)


def micro_density_series(trace, delta: float, anchor=None) -> list[tuple[float, DensityGrid]]:
    """Cube-average every snapshot of a micro trace at edge ``delta``."""
    series = []
    for snap in trace.snapshots:
        system = ParticleSystem(snap.positions, trace.radius, trace.drive)
        series.append((snap.t, cube_average(system, delta, anchor)))
    return series


def macro_density_series(macro_run, delta: float, anchor=None) -> list[tuple[float, DensityGrid]]:
    """Deposited macro densities at edge ``delta``, reusing stored grids when they match."""
    series = []
    for snap in macro_run.snapshots:
        grid = snap.density
        if grid is None or grid.delta != delta:
            grid = deposit(snap.positions, macro_run.weights, delta, anchor)
        series.append((snap.t, grid))
    return series


def compare_micro_macro(trace, macro_run, beta: float, delta: float, dt: float, anchor=None) -> ComparisonSeries:
    """X_beta distance between cube-averaged micro snapshots and deposited macro snapshots."""
    delta = ensure_positive("delta", delta)
    dt = ensure_positive("dt", dt)
    series = compare_snapshots(
        micro_density_series(trace, delta, anchor),
        macro_density_series(macro_run, delta, anchor),
        beta,
        max_skew=dt / 2.0,
    )
    logger.info("micro/macro comparison: %d times, sup distance %.4g", series.times.size, series.sup)
    return series
