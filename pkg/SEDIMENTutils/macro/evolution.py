"""Macroscopic runs, the falling-drop benchmark and the large-xi limit."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from ..meso.grid import DensityGrid, deposit
from ..micro.system import DEFAULT_DRIVE
from ..utils import as_vec3, ensure_positive
from .densities import AnalyticDensity
from .markers import MarkerCloud, blob_velocity, init_markers, step_macro

logger = logging.getLogger(__name__)

DEFAULT_SNAPSHOTS = 50
DROP_STEPS = 10


@dataclass(frozen=True)
class MacroSnapshot:
    t: float
    positions: np.ndarray
    density: DensityGrid | None = None

    def scalars(self) -> dict:
        data = {"t": self.t, "marker_count": int(self.positions.shape[0])}
        if self.density is not None:
            data["grid_mass"] = self.density.mass()
            data["grid_max"] = float(self.density.values.max()) if self.density.values.size else 0.0
        return data


@dataclass
class MacroRun:
    weights: np.ndarray
    snapshots: list[MacroSnapshot] = field(default_factory=list)
    final: MarkerCloud | None = None
    kind: str = "macro"

    @property
    def times(self) -> np.ndarray:
        return np.array([snap.t for snap in self.snapshots])

    @property
    def densities(self) -> list[DensityGrid | None]:
        return [snap.density for snap in self.snapshots]

    def mass_drift(self) -> float:
        """Largest relative deviation of the deposited mass from the marker mass."""
        mass = float(np.sum(self.weights))
        grids = [grid for grid in self.densities if grid is not None]
        if not grids or mass == 0:
            return 0.0
        return max(abs(grid.mass() - mass) / mass for grid in grids)

    def sup_variation(self) -> float:
        """Relative spread of the deposited maximum over time."""
        peaks = [grid.values.max() for grid in self.densities if grid is not None and grid.values.size]
        if not peaks or peaks[0] == 0:
            return 0.0
        return float((max(peaks) - min(peaks)) / peaks[0])


def run_macro(
    cloud: MarkerCloud,
    t_final: float,
    dt: float,
    snapshot_every: float | None = None,
    delta: float | None = None,
    anchor=None,
    scheme: str = "rk2",
    sink=None,
) -> MacroRun:
    """Evolve the markers and deposit them (centre rule) onto cubes of edge ``delta`` at each snapshot."""
    t_final = ensure_positive("t_final", t_final)
    dt = ensure_positive("dt", dt)
    cadence = t_final / DEFAULT_SNAPSHOTS if snapshot_every is None else ensure_positive(
        "snapshot_every", snapshot_every
    )
    slack = 1e-12 * t_final
    run = MacroRun(weights=cloud.weights)

    def record(current: MarkerCloud):
        positions = current.absolute_positions
        grid = deposit(positions, current.weights, delta, anchor) if delta is not None else None
        snap = MacroSnapshot(t=current.time, positions=positions, density=grid)
        run.snapshots.append(snap)
        if sink is not None:
            sink(snap)

    start = cloud.time
    k = 0
    next_snapshot = start
    while True:
        elapsed = cloud.time - start
        if cloud.time >= next_snapshot - slack:
            record(cloud)
            k += 1
            next_snapshot = start + min(k * cadence, t_final)
        if elapsed >= t_final - slack:
            break
        request = min(dt, next_snapshot - cloud.time)
        cloud = step_macro(cloud, request, scheme)
        if abs(cloud.time - next_snapshot) <= slack:
            cloud = replace(cloud, time=next_snapshot)
    run.final = cloud
    logger.info("macro run finished: %d markers, %d snapshots", cloud.count, len(run.snapshots))
    return run


@dataclass(frozen=True)
class DropReport:
    radius: float
    amplitude: float
    h: float
    marker_count: int
    mass: float
    center_velocity: np.ndarray
    relative_velocity: np.ndarray
    oracle_velocity: np.ndarray
    relative_error: float
    transit_time: float
    com_velocity: np.ndarray
    boundary_rms: float
    amplitude_ratio: float

    def as_dict(self) -> dict:
        data = {}
        for key, value in self.__dict__.items():
            data[key] = value.tolist() if isinstance(value, np.ndarray) else value
        return data


def uniform_ball_drop_report(
    a: float = 1.0,
    amplitude: float = 1.0,
    h: float | None = None,
    t_final: float | None = None,
    steps: int = DROP_STEPS,
    blob_factor: float = 2.0,
    xi_star: float = 1.0,
    drive=DEFAULT_DRIVE,
    kernel: str = "stokeslet",
    engine=None,
) -> DropReport:
    """Falling uniform ball: centre velocity against (a^2/3) A e and shape retention.

    ``t_final`` defaults to one transit time a / |v_centre|; boundary markers
    are the outermost lattice shell (initial radius >= a - h).
    """
    a = ensure_positive("a", a)
    h = a / 20.0 if h is None else ensure_positive("h", h)
    drive = as_vec3("drive", drive)
    density = AnalyticDensity("uniform_ball", radius=a, amplitude=amplitude)
    cloud = init_markers(density, h, blob_factor, xi_star, drive, kernel, engine=engine)
    center = density.center

    velocity = blob_velocity(cloud, center)
    relative = velocity - cloud.drift
    oracle = a * a / 3.0 * amplitude * drive
    scale = np.linalg.norm(oracle)
    error = float(np.linalg.norm(relative - oracle) / scale) if scale > 0 else float(np.linalg.norm(relative))

    doubled = init_markers(
        AnalyticDensity("uniform_ball", radius=a, amplitude=2.0 * amplitude),
        h, blob_factor, xi_star, drive, kernel, engine=engine,
    )
    doubled_relative = blob_velocity(doubled, center) - doubled.drift
    ratio = float(np.linalg.norm(doubled_relative) / np.linalg.norm(relative)) if np.any(relative) else 0.0

    speed = float(np.linalg.norm(velocity))
    transit = a / speed if t_final is None else ensure_positive("t_final", t_final)
    start_com = cloud.center_of_mass()
    start_radius = np.linalg.norm(cloud.absolute_positions - start_com, axis=1)
    boundary = start_radius >= a - h

    run = run_macro(cloud, transit, transit / steps, snapshot_every=transit)
    final = run.final
    end_com = final.center_of_mass()
    end_radius = np.linalg.norm(final.absolute_positions[boundary] - end_com, axis=1)
    rms = float(np.sqrt(np.mean((end_radius - start_radius[boundary]) ** 2)) / a)

    report = DropReport(
        radius=a,
        amplitude=amplitude,
        h=h,
        marker_count=cloud.count,
        mass=cloud.mass,
        center_velocity=velocity,
        relative_velocity=relative,
        oracle_velocity=oracle,
        relative_error=error,
        transit_time=transit,
        com_velocity=(end_com - start_com) / transit,
        boundary_rms=rms,
        amplitude_ratio=ratio,
    )
    logger.info("drop report: centre error %.3f%%, boundary rms %.3f%%", 100 * error, 100 * rms)
    return report


def large_xi_deviation(
    rho0,
    h: float,
    xis=(2.0, 4.0, 8.0),
    t_prime: float = 0.5,
    steps: int = 10,
    **cloud_options,
) -> list[tuple[float, float]]:
    """Deviation of marker trajectories from x + (2/9) t' e in rescaled time t' = xi*^2 t.

    Returns (xi, max_j |x_j(T) - x_j(0) - (2/9) t' e| / ((2/9) t' |e|)) per xi.
    """
    t_prime = ensure_positive("t_prime", t_prime)
    rows = []
    for xi in xis:
        xi = ensure_positive("xi", xi)
        cloud = init_markers(rho0, h, xi_star=xi, **cloud_options)
        t_final = t_prime / xi**2
        run = run_macro(cloud, t_final, t_final / steps, snapshot_every=t_final)
        expected = (2.0 / 9.0) * t_prime * cloud.drive
        offset = run.final.absolute_positions - cloud.absolute_positions - expected
        deviation = float(np.max(np.linalg.norm(offset, axis=1)) / np.linalg.norm(expected))
        rows.append((float(xi), deviation))
        logger.info("xi=%g: translation deviation %.3e", xi, deviation)
    return rows
