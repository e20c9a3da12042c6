"""Direct O(N^2) sums of sphere fields over all other particles.

The default ``numba`` backend runs the compiled loops of ``kernels.compiled``
over all targets in parallel, each target reducing its sources in index
order.  The ``numpy`` backend processes targets in chunks (optionally on a
thread pool).  In deterministic mode each target's contributions are
reduced in one index-ascending numpy sum over a contiguous row, so the
result does not depend on chunking or on the number of workers.  Otherwise
the source axis is blocked as well, which bounds memory at the price of a
different (still 1e-12-level) rounding.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass

import numba
import numpy as np

from ..exceptions import InsideSphere, ValidationError
from ..kernels.compiled import faxen_sums
from ..kernels.oseen import (
    oseen_apply,
    oseen_gradient_apply,
    oseen_laplacian_apply,
    oseen_laplacian_gradient_apply,
)
from ..kernels.sphere import (
    correction_apply,
    correction_gradient_apply,
    correction_laplacian_apply,
    correction_laplacian_gradient_apply,
)

logger = logging.getLogger(__name__)

# target x source pairs evaluated per chunk
PAIR_BUDGET = 1 << 16
SOURCE_BLOCK = 1024
BACKENDS = ("numba", "numpy")
# stands in for the excluded self pair; its contribution is zeroed
_SELF_PLACEHOLDER = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class AmbientField:
    """Per-particle sums from all other particles: (N, 3) mean and (N, 3, 3) gradient."""

    mean: np.ndarray | None
    gradient: np.ndarray | None


@dataclass(frozen=True)
class PairwiseEngine:
    workers: int = 1
    deterministic: bool = True
    pair_budget: int = PAIR_BUDGET
    source_block: int = SOURCE_BLOCK
    backend: str = "numba"

    def __post_init__(self):
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")
        if self.backend not in BACKENDS:
            raise ValidationError(f"Unknown pairwise backend '{self.backend}'. Expected one of {list(BACKENDS)}")

    @contextmanager
    def compiled_threads(self):
        """numba thread count for one call: all threads unless ``workers`` > 1 caps them."""
        if self.workers <= 1:
            yield
            return
        previous = numba.get_num_threads()
        numba.set_num_threads(min(self.workers, numba.config.NUMBA_NUM_THREADS))
        try:
            yield
        finally:
            numba.set_num_threads(previous)

    def sums(
        self,
        positions: np.ndarray,
        radius: float,
        force: np.ndarray,
        coeffs: np.ndarray | None = None,
        *,
        monopole_laplacian: float,
        average_radius: float,
        mean: bool = True,
        gradient: bool = True,
    ) -> AmbientField:
        """Sum the fields of every other sphere at each particle.

        Each source contributes ``(Phi + monopole_laplacian * Laplacian Phi) F``
        plus, when ``coeffs`` (N, 3, 3) is given, its linear correction with
        the ``average_radius**2 / 6`` Laplacian term of a surface mean.
        """
        positions = np.asarray(positions, dtype=float)
        n = positions.shape[0]
        out_mean = np.zeros((n, 3)) if mean else None
        out_grad = np.zeros((n, 3, 3)) if gradient else None
        if n < 2 or not (mean or gradient):
            return AmbientField(out_mean, out_grad)
        if coeffs is not None and not np.any(coeffs):
            coeffs = None

        force = np.asarray(force, dtype=float)
        if self.backend == "numba":
            return self._compiled_sums(
                positions, radius, force, coeffs, monopole_laplacian, average_radius, mean, gradient
            )

        def run(start, stop):
            return self._chunk(
                start,
                stop,
                positions=positions,
                radius=radius,
                force=force,
                coeffs=coeffs,
                monopole_laplacian=monopole_laplacian,
                average_radius=average_radius,
                mean=mean,
                gradient=gradient,
            )

        for (start, stop), (chunk_mean, chunk_grad) in self.map_targets(n, n, run):
            if mean:
                out_mean[start:stop] = chunk_mean
            if gradient:
                out_grad[start:stop] = chunk_grad
        return AmbientField(out_mean, out_grad)

    def source_blocks(self, n_sources: int):
        """(start, stop) ranges of the source axis; a single block in deterministic mode."""
        width = max(1, n_sources if self.deterministic else min(n_sources, self.source_block))
        for start in range(0, n_sources, width):
            yield start, min(start + width, n_sources)

    def map_targets(self, n_targets: int, n_sources: int, fn) -> list:
        """Apply ``fn(start, stop)`` to target chunks; returns [((start, stop), result), ...] in order."""
        width = max(1, n_sources if self.deterministic else min(n_sources, self.source_block))
        chunk = max(1, self.pair_budget // width)
        bounds = [(start, min(start + chunk, n_targets)) for start in range(0, n_targets, chunk)]
        if self.workers == 1 or len(bounds) < 2:
            return [(bound, fn(*bound)) for bound in bounds]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            results = list(pool.map(lambda bound: fn(*bound), bounds))
        return list(zip(bounds, results))

    @staticmethod
    def reduce_sources(values: np.ndarray) -> np.ndarray:
        """Sum over axis 1 (sources) in a layout that does not depend on the chunk size."""
        return np.ascontiguousarray(np.moveaxis(values, 1, -1)).sum(axis=-1)

    def _compiled_sums(self, positions, radius, force, coeffs, monopole_laplacian, average_radius,
                       mean, gradient):
        n = positions.shape[0]
        has_coeffs = coeffs is not None
        packed = np.ascontiguousarray(coeffs, dtype=float) if has_coeffs else np.zeros((n, 3, 3))
        with self.compiled_threads():
            out_mean, out_grad, overlap = faxen_sums(
                np.ascontiguousarray(positions),
                np.ascontiguousarray(force.reshape(3)),
                packed,
                has_coeffs,
                float(radius),
                float(monopole_laplacian),
                float(average_radius),
                bool(mean),
                bool(gradient),
            )
        if np.any(overlap):
            raise InsideSphere("averaging sphere overlaps another particle")
        return AmbientField(out_mean if mean else None, out_grad if gradient else None)

    # ------------------------------------------------------------------
    def _chunk(self, start, stop, *, positions, radius, force, coeffs, monopole_laplacian,
               average_radius, mean, gradient):
        targets = positions[start:stop]
        acc_mean = np.zeros((stop - start, 3)) if mean else None
        acc_grad = np.zeros((stop - start, 3, 3)) if gradient else None
        for s0, s1 in self.source_blocks(positions.shape[0]):
            y = targets[:, None, :] - positions[None, s0:s1, :]
            keep = np.ones(y.shape[:2])
            rows = np.arange(stop - start)
            cols = rows + start - s0
            own = (cols >= 0) & (cols < s1 - s0)
            y[rows[own], cols[own]] = _SELF_PLACEHOLDER
            keep[rows[own], cols[own]] = 0.0
            r = np.sqrt(np.einsum("...i,...i->...", y, y))
            if np.any((r < radius + average_radius) & (keep > 0)):
                raise InsideSphere("averaging sphere overlaps another particle")
            block_coeffs = None if coeffs is None else coeffs[None, s0:s1]
            if mean:
                acc_mean += self.reduce_sources(
                    keep[..., None] * self._mean_terms(y, radius, force, block_coeffs,
                                                       monopole_laplacian, average_radius)
                )
            if gradient:
                acc_grad += self.reduce_sources(
                    keep[..., None, None] * self._gradient_terms(y, radius, force, block_coeffs,
                                                                 monopole_laplacian, average_radius)
                )
        return acc_mean, acc_grad

    @staticmethod
    def _mean_terms(y, radius, force, coeffs, monopole_laplacian, average_radius):
        terms = oseen_apply(y, force) + monopole_laplacian * oseen_laplacian_apply(y, force)
        if coeffs is not None:
            terms = terms + correction_apply(y, coeffs, radius)
            if average_radius > 0:
                terms = terms + average_radius**2 / 6.0 * correction_laplacian_apply(y, coeffs, radius)
        return terms

    @staticmethod
    def _gradient_terms(y, radius, force, coeffs, monopole_laplacian, average_radius):
        terms = oseen_gradient_apply(y, force) + monopole_laplacian * oseen_laplacian_gradient_apply(y, force)
        if coeffs is not None:
            terms = terms + correction_gradient_apply(y, coeffs, radius)
            if average_radius > 0:
                terms = terms + average_radius**2 / 6.0 * correction_laplacian_gradient_apply(
                    y, coeffs, radius
                )
        return terms
