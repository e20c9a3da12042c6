"""Epsilon-ladder sweeps comparing the particle system with the macroscopic limit."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from ..exceptions import PhysicsGuardError, SedimentError
from ..macro.evolution import run_macro
from ..macro.markers import init_markers
from ..meso.grid import coarsen
from ..meso.norms import x_beta_distance
from ..micro.diagnostics import y_growth
from ..micro.dynamics import run_micro
from ..micro.reflections import solve_velocities, volume_force_velocities
from ..micro.system import generate_configuration
from ..schemas.validators import SYSTEM_MASS, ExperimentConfig
from .compare import compare_snapshots, macro_density_series, micro_density_series
from .report import STATUS_FAILED, ConvergenceReport, ConvergenceRow

logger = logging.getLogger(__name__)


def _trace_stats(trace) -> dict:
    if trace is None or not trace.snapshots:
        return {}
    iterations = [snap.iterations for snap in trace.snapshots]
    growth = y_growth(trace.times, trace.y)
    return {
        "final_d_min": float(trace.snapshots[-1].d_min),
        "max_y": float(np.max(trace.y)),
        "y_rate": growth.rate,
        "y_envelope_rate": growth.envelope_rate,
        "y_doubling_time": growth.doubling_time,
        "mean_iterations": float(np.mean(iterations)),
        "max_iterations": int(np.max(iterations)),
        "max_residual": float(np.max(trace.residuals)),
        "max_delta_stat": float(max(snap.delta_stat for snap in trace.snapshots)),
        "snapshots": len(trace.snapshots),
    }


def volume_force_gap(system, params) -> float:
    """max_i |u_i - u~_i| / max_i |u_i| between solved and volume-force velocities."""
    exact = solve_velocities(system, params).velocities
    smeared = volume_force_velocities(system, params)
    return float(np.max(np.linalg.norm(exact - smeared, axis=1)) / np.max(np.linalg.norm(exact, axis=1)))


def run_rung(config: ExperimentConfig, index: int) -> ConvergenceRow:
    """One ladder rung; SEDIMENT errors become a failed row."""
    n = config.epsilon_ladder[index]
    seed = config.seed_for(index)
    xi = config.xi_target
    radius = 1.0 / (n * xi * xi)
    started = time.perf_counter()
    stats: dict = {}

    try:
        density = config.density.build().normalized(SYSTEM_MASS)
        system = generate_configuration(n, config.c0, seed, shape=density, xi=xi)
        params = replace(config.reflection.to_params(), deterministic=config.deterministic)
        stats["initial_d_min"] = float(system.d_min)
        stats["volume_force_gap"] = volume_force_gap(system, params)

        trace = None
        try:
            trace = run_micro(
                system,
                config.t_final,
                config.dt,
                snapshot_every=config.snapshot_every,
                scheme=config.scheme,
                cfl_frac=config.cfl_frac,
                params=params,
            )
        except PhysicsGuardError as exc:
            stats.update(_trace_stats(exc.partial))
            raise
        stats.update(_trace_stats(trace))

        if np.isfinite(system.d_min):
            delta = config.delta_factor * system.d_min
        else:
            delta = config.delta_factor * density.support_radius
        delta_tilde = config.delta_tilde_factor * delta
        stats.update(delta=float(delta), delta_tilde=float(delta_tilde))

        cloud = init_markers(
            density,
            config.macro_h,
            blob_factor=config.blob_factor,
            xi_star=xi,
            drive=system.drive,
            kernel=config.kernel,
            engine=params.engine(),
        )
        macro = run_macro(
            cloud,
            config.t_final,
            config.dt,
            snapshot_every=config.snapshot_every,
            delta=delta_tilde,
            scheme=config.scheme,
        )

        fine = micro_density_series(trace, delta)
        coarse = [(t, coarsen(grid, config.delta_tilde_factor)) for t, grid in fine]
        series = compare_snapshots(coarse, macro_density_series(macro, delta_tilde), config.beta, config.dt / 2.0)
        stats.update(
            initial_distance=series.initial,
            sup_distance=series.sup,
            refinement_gap=float(x_beta_distance(fine[-1][1], coarse[-1][1], config.beta)),
        )
    except SedimentError as exc:
        logger.warning("rung N=%d failed: %s", n, exc)
        return ConvergenceRow(
            n=n,
            seed=seed,
            radius=radius,
            xi=xi,
            status=STATUS_FAILED,
            error=f"{type(exc).__name__}: {exc}",
            wall_time=time.perf_counter() - started,
            **stats,
        )

    row = ConvergenceRow(n=n, seed=seed, radius=radius, xi=xi, wall_time=time.perf_counter() - started, **stats)
    logger.info("rung N=%d: sup X_beta distance %.4g", n, row.sup_distance)
    return row


def sweep_epsilon(config: ExperimentConfig) -> ConvergenceReport:
    """Run every rung of ``config.epsilon_ladder``; rungs may run concurrently, rows keep ladder order."""
    indices = range(len(config.epsilon_ladder))
    if config.row_workers > 1 and len(config.epsilon_ladder) > 1:
        with ThreadPoolExecutor(max_workers=config.row_workers) as pool:
            rows = list(pool.map(lambda i: run_rung(config, i), indices))
    else:
        rows = [run_rung(config, i) for i in indices]
    report = ConvergenceReport(tuple(rows), config.model_dump(mode="json"))
    logger.info("sweep finished: %d rows, %d failed", len(rows), len(report.failed))
    return report
