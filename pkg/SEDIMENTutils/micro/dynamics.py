"""Explicit time stepping of the particle dynamics X_i' = V_i."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..exceptions import CollisionImminent, PhysicsGuardError, ValidationError
from ..utils import ensure_positive
from .diagnostics import max_distance_ratio, min_distance
from .reflections import DEFAULT_PARAMS, ReflectionParams, VelocitySolution, solve_velocities
from .system import ParticleSystem

logger = logging.getLogger(__name__)

SCHEMES = ("euler", "rk2")
DEFAULT_CFL = 0.1
COLLISION_RADII = 3.0
DEFAULT_SNAPSHOTS = 50


@dataclass(frozen=True)
class DynamicsStep:
    """Result of one accepted step; ``solution`` holds the velocities at the step start."""

    system: ParticleSystem
    dt: float
    solution: VelocitySolution


@dataclass(frozen=True)
class Snapshot:
    t: float
    positions: np.ndarray
    velocities: np.ndarray
    d_min: float
    y: float
    residual: float
    delta_stat: float
    alpha_stat: float
    iterations: int

    def scalars(self) -> dict:
        return {
            "t": self.t,
            "d_min": self.d_min,
            "y": self.y,
            "residual": self.residual,
            "delta_stat": self.delta_stat,
            "alpha_stat": self.alpha_stat,
            "iterations": self.iterations,
        }


@dataclass
class SimulationTrace:
    radius: float
    drive: np.ndarray
    snapshots: list[Snapshot] = field(default_factory=list)
    step_sizes: list[float] = field(default_factory=list)
    step_residuals: list[float] = field(default_factory=list)
    events: list[dict] = field(default_factory=list)
    kind: str = "micro"

    def append(self, snapshot: Snapshot):
        if self.snapshots and snapshot.t <= self.snapshots[-1].t:
            raise ValidationError(
                f"snapshot time {snapshot.t} does not follow {self.snapshots[-1].t}"
            )
        self.snapshots.append(snapshot)

    def log_event(self, t: float, kind: str, detail: str = ""):
        self.events.append({"t": float(t), "kind": kind, "detail": detail})

    @property
    def times(self) -> np.ndarray:
        return np.array([snap.t for snap in self.snapshots])

    @property
    def positions(self) -> list[np.ndarray]:
        return [snap.positions for snap in self.snapshots]

    @property
    def velocities(self) -> list[np.ndarray]:
        return [snap.velocities for snap in self.snapshots]

    @property
    def d_min(self) -> np.ndarray:
        return np.array([snap.d_min for snap in self.snapshots])

    @property
    def y(self) -> np.ndarray:
        return np.array([snap.y for snap in self.snapshots])

    @property
    def residuals(self) -> np.ndarray:
        return np.array([snap.residual for snap in self.snapshots])


def _check_scheme(scheme: str):
    if scheme not in SCHEMES:
        raise ValidationError(f"Unknown scheme '{scheme}'. Expected one of {SCHEMES}")


def step_dynamics(
    system: ParticleSystem,
    dt: float,
    scheme: str = "rk2",
    cfl_frac: float = DEFAULT_CFL,
    params: ReflectionParams = DEFAULT_PARAMS,
    solution: VelocitySolution | None = None,
) -> DynamicsStep:
    """Advance by min(dt, cfl_frac * d_min / max|V|) with Euler or midpoint RK2.

    Raises CollisionImminent (and rejects the step) if the tentative
    positions bring two spheres closer than 3R.
    """
    dt = ensure_positive("dt", dt)
    cfl_frac = ensure_positive("cfl_frac", cfl_frac)
    _check_scheme(scheme)
    start = solution if solution is not None else solve_velocities(system, params)

    speed = float(np.max(np.linalg.norm(start.velocities, axis=1)))
    if speed > 0 and np.isfinite(system.d_min):
        cap = cfl_frac * system.d_min / speed
        if dt > cap:
            logger.debug("dt %.3e capped to %.3e", dt, cap)
            dt = cap

    positions = system.positions
    if scheme == "euler":
        moved = positions + dt * start.velocities
    else:
        midpoint = system.with_positions(positions + 0.5 * dt * start.velocities)
        middle = solve_velocities(midpoint, params)
        moved = positions + dt * middle.velocities

    gap = min_distance(moved)
    if gap < COLLISION_RADII * system.radius:
        raise CollisionImminent(
            f"step of {dt:.3e} would bring particles to {gap:.3e} < {COLLISION_RADII:g}R"
        )
    return DynamicsStep(system=system.with_positions(moved), dt=dt, solution=start)


def run_micro(
    system: ParticleSystem,
    t_final: float,
    dt: float,
    sink: Callable[[Snapshot], None] | None = None,
    snapshot_every: float | None = None,
    scheme: str = "rk2",
    cfl_frac: float = DEFAULT_CFL,
    params: ReflectionParams = DEFAULT_PARAMS,
) -> SimulationTrace:
    """Integrate to ``t_final`` recording snapshots every ``snapshot_every`` (default T/50).

    Guard errors propagate with the trace recorded so far in ``partial``.
    """
    t_final = ensure_positive("t_final", t_final)
    dt = ensure_positive("dt", dt)
    _check_scheme(scheme)
    cadence = t_final / DEFAULT_SNAPSHOTS if snapshot_every is None else ensure_positive(
        "snapshot_every", snapshot_every
    )
    slack = 1e-12 * t_final
    trace = SimulationTrace(radius=system.radius, drive=system.drive)
    initial = system.positions
    running_y = 1.0

    def record(t, current, solution):
        nonlocal running_y
        running_y = max(running_y, max_distance_ratio(initial, current.positions))
        snap = Snapshot(
            t=float(t),
            positions=current.positions,
            velocities=solution.velocities,
            d_min=current.d_min,
            y=running_y,
            residual=solution.final_residual,
            delta_stat=solution.delta_stat,
            alpha_stat=solution.alpha_stat,
            iterations=solution.iterations_used,
        )
        trace.append(snap)
        if sink is not None:
            sink(snap)

    t = 0.0
    next_snapshot = 0.0
    k = 0
    try:
        solution = solve_velocities(system, params)
        while True:
            if not solution.converged:
                trace.log_event(t, "not_converged", f"residual {solution.final_residual:.3e}")
            if t >= next_snapshot - slack:
                record(t, system, solution)
                k += 1
                next_snapshot = min(k * cadence, t_final)
            if t >= t_final - slack:
                break
            request = min(dt, next_snapshot - t)
            step = step_dynamics(system, request, scheme, cfl_frac, params, solution=solution)
            if step.dt < request:
                trace.log_event(t, "cfl_cap", f"{request:.3e} -> {step.dt:.3e}")
            trace.step_sizes.append(step.dt)
            trace.step_residuals.append(solution.final_residual)
            t += step.dt
            if abs(next_snapshot - t) <= slack:
                t = next_snapshot
            system = step.system
            solution = solve_velocities(system, params)
    except PhysicsGuardError as exc:
        trace.log_event(t, type(exc).__name__, str(exc))
        logger.warning("micro run stopped at t=%.4g: %s", t, exc)
        exc.partial = trace
        raise

    logger.info("micro run finished: %d steps, %d snapshots", len(trace.step_sizes), len(trace.snapshots))
    return trace
