"""Lagrangian blob markers for the transport-Stokes system.

Markers are stored in a frame that moves with the constant drift
(2/9) xi*^2 e + u0.  The interaction velocity depends on position differences
only, so it is computed in that frame and the drift is added to
``frame_shift`` analytically; two runs that differ only by u0 therefore
produce identical co-moving positions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from ..exceptions import EmptyDensity, ValidationError
from ..kernels.compiled import KERNEL_IDS, blob_sums
from ..kernels.oseen import BLOB_KERNELS
from ..micro.pairwise import PairwiseEngine
from ..micro.system import DEFAULT_DRIVE
from ..utils import as_points, as_vec3, ensure_nonnegative, ensure_positive

logger = logging.getLogger(__name__)

DEFAULT_BLOB_FACTOR = 2.0
MASS_FLOOR = 1e-14
SCHEMES = ("euler", "rk2")


@dataclass(frozen=True)
class MarkerCloud:
    positions: np.ndarray
    weights: np.ndarray
    blob_width: float
    xi_star: float = 1.0
    drive: np.ndarray = field(default_factory=lambda: np.array(DEFAULT_DRIVE))
    extra_drift: np.ndarray = field(default_factory=lambda: np.zeros(3))
    frame_shift: np.ndarray = field(default_factory=lambda: np.zeros(3))
    kernel: str = "stokeslet"
    time: float = 0.0
    engine: PairwiseEngine = field(default_factory=PairwiseEngine, repr=False)

    def __post_init__(self):
        positions = as_points("positions", self.positions) if len(self.positions) else np.zeros((0, 3))
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if weights.shape[0] != positions.shape[0]:
            raise ValidationError("positions and weights must have the same length")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ValidationError("marker weights must be finite and non-negative")
        if self.kernel not in BLOB_KERNELS:
            raise ValidationError(f"Unknown blob kernel '{self.kernel}'. Expected one of {sorted(BLOB_KERNELS)}")
        positions = positions.copy()
        weights = weights.copy()
        positions.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "blob_width", ensure_positive("blob_width", self.blob_width))
        object.__setattr__(self, "xi_star", ensure_nonnegative("xi_star", self.xi_star))
        object.__setattr__(self, "drive", as_vec3("drive", self.drive))
        object.__setattr__(self, "extra_drift", as_vec3("extra_drift", self.extra_drift))
        object.__setattr__(self, "frame_shift", as_vec3("frame_shift", self.frame_shift))

    @property
    def count(self) -> int:
        return int(self.positions.shape[0])

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def drift(self) -> np.ndarray:
        """Self-settling drift (2/9) xi*^2 e plus the extra constant u0."""
        return (2.0 / 9.0) * self.xi_star**2 * self.drive + self.extra_drift

    @property
    def absolute_positions(self) -> np.ndarray:
        return self.positions + self.frame_shift

    def center_of_mass(self) -> np.ndarray:
        if self.mass == 0:
            return self.frame_shift.copy()
        return self.weights @ self.absolute_positions / self.mass


def init_markers(
    rho0,
    h: float,
    blob_factor: float = DEFAULT_BLOB_FACTOR,
    xi_star: float = 1.0,
    drive=DEFAULT_DRIVE,
    kernel: str = "stokeslet",
    extra_drift=None,
    mass_floor: float = MASS_FLOOR,
    engine: PairwiseEngine | None = None,
) -> MarkerCloud:
    """Markers at the centres of an h-lattice around rho0's centre, weight rho0(x) h^3."""
    h = ensure_positive("h", h)
    density = rho0.build() if hasattr(rho0, "build") else rho0
    reach = density.support_radius
    count = int(np.ceil(reach / h))
    axis = (np.arange(-count, count) + 0.5) * h
    points = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3) + density.center
    weights = np.asarray(density(points), dtype=float) * h**3
    keep = weights > mass_floor
    if not np.any(keep):
        raise EmptyDensity(f"no marker above mass floor {mass_floor:g} (h={h:g})")
    logger.info("initialised %d markers at h=%g", int(np.count_nonzero(keep)), h)
    return MarkerCloud(
        positions=points[keep],
        weights=weights[keep],
        blob_width=blob_factor * h,
        xi_star=xi_star,
        drive=drive,
        extra_drift=np.zeros(3) if extra_drift is None else extra_drift,
        kernel=kernel,
        engine=engine or PairwiseEngine(),
    )


def _interaction(cloud: MarkerCloud, targets: np.ndarray, sources: np.ndarray) -> np.ndarray:
    """sum_j w_j K_eps(x - x_j) e at each target, self terms included."""
    out = np.zeros((targets.shape[0], 3))
    if sources.shape[0] == 0 or targets.shape[0] == 0:
        return out
    if cloud.engine.backend == "numba":
        with cloud.engine.compiled_threads():
            return blob_sums(
                np.ascontiguousarray(targets, dtype=float),
                np.ascontiguousarray(sources, dtype=float),
                cloud.weights,
                cloud.drive,
                float(cloud.blob_width),
                KERNEL_IDS[cloud.kernel],
            )
    kernel = BLOB_KERNELS[cloud.kernel]
    engine = cloud.engine
    forces = cloud.weights[:, None] * cloud.drive

    def run(start, stop):
        acc = np.zeros((stop - start, 3))
        for s0, s1 in engine.source_blocks(sources.shape[0]):
            y = targets[start:stop, None, :] - sources[None, s0:s1, :]
            acc += engine.reduce_sources(kernel(y, forces[None, s0:s1], cloud.blob_width))
        return acc

    for (start, stop), values in engine.map_targets(targets.shape[0], sources.shape[0], run):
        out[start:stop] = values
    return out


def blob_velocity(cloud: MarkerCloud, x) -> np.ndarray:
    """Regularised Oseen sum of the markers plus the analytic drift, at (3,) or (M, 3) points."""
    single = np.asarray(x).ndim == 1
    points = as_points("x", x)
    velocity = _interaction(cloud, points, cloud.absolute_positions) + cloud.drift
    return velocity[0] if single else velocity


def marker_velocities(cloud: MarkerCloud) -> np.ndarray:
    """Velocities of the markers themselves (drift included)."""
    return _interaction(cloud, cloud.positions, cloud.positions) + cloud.drift


def step_macro(cloud: MarkerCloud, dt: float, scheme: str = "rk2") -> MarkerCloud:
    """Advance the markers; weights are untouched and the drift moves the frame."""
    dt = ensure_positive("dt", dt)
    if scheme not in SCHEMES:
        raise ValidationError(f"Unknown scheme '{scheme}'. Expected one of {SCHEMES}")
    start = _interaction(cloud, cloud.positions, cloud.positions)
    if scheme == "euler":
        moved = cloud.positions + dt * start
    else:
        half = cloud.positions + 0.5 * dt * start
        moved = cloud.positions + dt * _interaction(cloud, half, half)
    return replace(
        cloud,
        positions=moved,
        frame_shift=cloud.frame_shift + dt * cloud.drift,
        time=cloud.time + dt,
    )
