"""Distance and aggregation diagnostics of particle configurations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from ..exceptions import ValidationError
from ..utils import as_points

# rows per block for the dense O(N^2) distance passes
ROW_BLOCK = 256


def min_distance(positions) -> float:
    """Smallest pairwise distance; +inf for a single particle."""
    points = as_points("positions", positions)
    if points.shape[0] < 2:
        return math.inf
    distances, _ = cKDTree(points).query(points, k=2)
    return float(distances[:, 1].min())


def _row_blocks(n: int, block: int = ROW_BLOCK):
    for start in range(0, n, block):
        yield start, min(start + block, n)


def inverse_distance_sums(positions, powers=(2, 3)) -> dict[int, np.ndarray]:
    """Per-particle sums of |X_i - X_j|^-p over j != i, one array per power."""
    points = as_points("positions", positions)
    n = points.shape[0]
    sums = {p: np.zeros(n) for p in powers}
    if n < 2:
        return sums
    for start, stop in _row_blocks(n):
        dist = cdist(points[start:stop], points)
        dist[np.arange(stop - start), np.arange(start, stop)] = np.inf
        for p in powers:
            sums[p][start:stop] = np.sum(dist ** (-float(p)), axis=1)
    return sums


def delta_statistic(system) -> float:
    """delta = sup_j (phi / N) sum_{i != j} |X_i - X_j|^-3; 0 for a single particle."""
    if system.count < 2:
        return 0.0
    sums = inverse_distance_sums(system.positions, powers=(3,))
    return float(system.volume_fraction / system.count * sums[3].max())


def alpha_statistic(system) -> float:
    """alpha = sup_j (1 / N) sum_{i != j} |X_i - X_j|^-2; 0 for a single particle."""
    if system.count < 2:
        return 0.0
    sums = inverse_distance_sums(system.positions, powers=(2,))
    return float(sums[2].max() / system.count)


def max_distance_ratio(initial, current) -> float:
    """max over pairs of |X_i(0) - X_j(0)| / |X_i(s) - X_j(s)|; 1 for N = 1."""
    start_points = as_points("initial", initial)
    now_points = as_points("current", current)
    n = start_points.shape[0]
    if n < 2:
        return 1.0
    worst = 0.0
    for start, stop in _row_blocks(n):
        before = cdist(start_points[start:stop], start_points)
        after = cdist(now_points[start:stop], now_points)
        rows = np.arange(stop - start)
        before[rows, np.arange(start, stop)] = 0.0
        after[rows, np.arange(start, stop)] = 1.0
        worst = max(worst, float(np.max(before / after)))
    return worst


def y_statistic(trace) -> np.ndarray:
    """Running maximum of the pair distance ratio over the stored snapshots."""
    snapshots = trace.positions
    if len(snapshots) == 0:
        raise ValidationError("trace has no snapshots")
    ratios = [max(1.0, max_distance_ratio(snapshots[0], snap)) for snap in snapshots]
    return np.maximum.accumulate(np.asarray(ratios))


@dataclass(frozen=True)
class YGrowth:
    """Exponential growth of Y(t) over the recorded snapshots.

    ``rate`` is the least-squares slope of log Y(t) through the origin;
    ``envelope_rate`` is the smallest C with Y(t) <= Y(0) e^{C t} at every
    snapshot. ``doubling_time`` is the first snapshot time with
    Y(t) >= 2 Y(0), i.e. some pair distance has halved; ``None`` if never.
    """

    rate: float
    envelope_rate: float
    doubling_time: Optional[float]


def y_growth(times, y) -> YGrowth:
    times = np.asarray(times, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if times.size == 0 or times.size != y.size:
        raise ValidationError(f"need matching non-empty times and Y values, got {times.size} and {y.size}")
    if np.any(y < 1.0):
        raise ValidationError("Y values must be >= 1")
    elapsed = times - times[0]
    logs = np.log(y / y[0])
    later = elapsed > 0
    if not np.any(later):
        return YGrowth(0.0, 0.0, None)
    rate = float(np.dot(elapsed[later], logs[later]) / np.dot(elapsed[later], elapsed[later]))
    envelope = float(max(0.0, np.max(logs[later] / elapsed[later])))
    doubled = np.flatnonzero(y >= 2.0 * y[0])
    doubling = float(elapsed[doubled[0]]) if doubled.size else None
    return YGrowth(rate, envelope, doubling)
