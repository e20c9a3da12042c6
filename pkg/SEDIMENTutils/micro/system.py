"""Particle systems and jittered-lattice configuration generation."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..exceptions import InfeasibleConfig, ValidationError
from ..utils import as_points, as_vec3, ensure_positive
from .diagnostics import min_distance

logger = logging.getLogger(__name__)

DEFAULT_DRIVE = (0.0, 0.0, -1.0)
MAX_ATTEMPTS = 1000
# disjointness used for generation and assumption checks (in radii)
DISJOINT_RADII = 4.0
# phi * log N above this is reported as "not dilute"
PHI_LOG_N_LIMIT = 0.1
# candidate lattice points per requested particle when thinning a density
DENSITY_OVERSAMPLE = 4.0


@dataclass(frozen=True)
class ParticleSystem:
    """Monodisperse suspension in rescaled units.

    Construction only checks shapes and finiteness; the 4R disjointness and
    the separation constant are enforced by ``generate_configuration`` and
    reported by ``validate_assumptions``.
    """

    positions: np.ndarray
    radius: float
    drive: np.ndarray = field(default_factory=lambda: np.array(DEFAULT_DRIVE))
    c0: float = 1.0
    seed: int | None = None

    def __post_init__(self):
        positions = as_points("positions", self.positions).copy()
        positions.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "radius", ensure_positive("radius", self.radius))
        object.__setattr__(self, "drive", as_vec3("drive", self.drive))
        object.__setattr__(self, "c0", ensure_positive("c0", self.c0))

    @property
    def count(self) -> int:
        return int(self.positions.shape[0])

    @property
    def volume_fraction(self) -> float:
        """phi = N R^3."""
        return self.count * self.radius**3

    @property
    def xi(self) -> float:
        """Screening parameter 1 / sqrt(N R)."""
        return 1.0 / math.sqrt(self.count * self.radius)

    @property
    def force(self) -> np.ndarray:
        """Per-particle force (4 pi / 3N) e."""
        return (4.0 * np.pi / (3.0 * self.count)) * self.drive

    @cached_property
    def d_min(self) -> float:
        return min_distance(self.positions)

    def with_positions(self, positions) -> "ParticleSystem":
        return ParticleSystem(
            positions=positions, radius=self.radius, drive=self.drive, c0=self.c0, seed=self.seed
        )

    def as_dict(self) -> dict:
        return {
            "radius": self.radius,
            "c0": self.c0,
            "drive": self.drive.tolist(),
            "seed": self.seed,
            "positions": self.positions.tolist(),
        }


@dataclass(frozen=True)
class AssumptionReport:
    count: int
    d_min: float
    separation_product: float
    c0: float
    volume_fraction: float
    phi_log_n: float
    xi: float
    separated: bool
    dilute: bool
    screening_finite: bool
    disjoint: bool

    @property
    def hard_failure(self) -> bool:
        """Overlapping or near-touching spheres invalidate every later estimate."""
        return not self.disjoint

    @property
    def passed(self) -> bool:
        return self.separated and self.dilute and self.screening_finite and self.disjoint

    def as_dict(self) -> dict:
        data = dict(self.__dict__)
        data["passed"] = self.passed
        data["hard_failure"] = self.hard_failure
        return data


def validate_assumptions(system: ParticleSystem, phi_log_limit: float = PHI_LOG_N_LIMIT) -> AssumptionReport:
    """Check separation, diluteness and screening; pure diagnostic, never raises."""
    n = system.count
    d_min = system.d_min
    product = math.inf if math.isinf(d_min) else n * d_min**3
    phi = system.volume_fraction
    phi_log_n = phi * math.log(n)
    xi = system.xi
    report = AssumptionReport(
        count=n,
        d_min=d_min,
        separation_product=product,
        c0=system.c0,
        volume_fraction=phi,
        phi_log_n=phi_log_n,
        xi=xi,
        separated=product >= system.c0 * (1.0 - 1e-12),
        dilute=phi_log_n <= phi_log_limit,
        screening_finite=math.isfinite(xi) and xi > 0,
        disjoint=d_min >= DISJOINT_RADII * system.radius,
    )
    if report.hard_failure:
        logger.warning("particles closer than %gR (d_min=%g, R=%g)", DISJOINT_RADII, d_min, system.radius)
    return report


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------
def _centered_lattice(spacing: float, bound: float) -> np.ndarray:
    m = int(math.floor(bound / spacing))
    axis = spacing * np.arange(-m, m + 1)
    grid = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1)
    return grid.reshape(-1, 3)


def _nearest(points: np.ndarray, n: int, norm: np.ndarray) -> np.ndarray:
    # ties broken lexicographically so the choice is reproducible
    order = np.lexsort((points[:, 2], points[:, 1], points[:, 0], np.round(norm, 12)))
    return points[order[:n]]


def _ball_lattice(n: int) -> tuple[np.ndarray, float]:
    spacing = (4.0 * np.pi / (3.0 * n)) ** (1.0 / 3.0)
    while True:
        points = _centered_lattice(spacing, 1.0)
        norm = np.linalg.norm(points, axis=1)
        points, norm = points[norm <= 1.0], norm[norm <= 1.0]
        if points.shape[0] >= n:
            return _nearest(points, n, norm), spacing
        spacing *= 0.98


def _cube_lattice(n: int) -> tuple[np.ndarray, float]:
    per_axis = int(math.ceil(n ** (1.0 / 3.0) - 1e-12))
    spacing = 2.0 / per_axis
    axis = -1.0 + spacing * (np.arange(per_axis) + 0.5)
    points = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
    return _nearest(points, n, np.max(np.abs(points), axis=1)), spacing


def _density_candidates(density, n: int, required: float) -> tuple[np.ndarray, np.ndarray, float]:
    bound = density.support_radius
    spacing = (8.0 * bound**3 / (DENSITY_OVERSAMPLE * n)) ** (1.0 / 3.0)
    while True:
        points = _centered_lattice(spacing, bound) + density.center
        weights = np.asarray(density(points), dtype=float)
        keep = weights > 0
        count = int(np.count_nonzero(keep))
        if count >= DENSITY_OVERSAMPLE * n or (count >= n and spacing * 0.95 < required):
            return points[keep], weights[keep], spacing
        if spacing * 0.95 < required:
            raise InfeasibleConfig(
                f"density support holds only {count} lattice sites at separation {required:g}; need {n}"
            )
        spacing *= 0.95


def generate_configuration(
    n: int,
    c0: float,
    seed: int,
    shape="ball",
    xi: float = 1.0,
    drive=DEFAULT_DRIVE,
    jitter: float = 0.5,
    max_attempts: int = MAX_ATTEMPTS,
) -> ParticleSystem:
    """Jittered lattice with d_min >= (c0/n)^(1/3) and radius 1/(n xi^2).

    ``shape`` is ``"ball"`` (unit ball), ``"cube"`` ([-1, 1]^3) or a density
    (``AnalyticDensity`` or anything with ``build()`` returning one); density
    shapes keep exactly ``n`` lattice sites drawn with probability
    proportional to the density.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n}")
    c0 = ensure_positive("c0", c0)
    xi = ensure_positive("xi", xi)
    if not 0.0 <= jitter <= 1.0:
        raise ValidationError(f"jitter must lie in [0, 1], got {jitter}")
    radius = 1.0 / (n * xi * xi)
    required = max((c0 / n) ** (1.0 / 3.0), DISJOINT_RADII * radius)
    rng = np.random.default_rng(seed)
    density = shape.build() if hasattr(shape, "build") else shape

    if isinstance(density, str) and density not in ("ball", "cube"):
        raise ValidationError(f"Unknown configuration shape '{shape}'")
    if n == 1:
        origin = np.zeros(3) if isinstance(density, str) else as_vec3("center", density.center)
        return ParticleSystem(np.atleast_2d(origin), radius, drive, c0, seed)

    candidates = weights = None
    if isinstance(density, str) and density == "ball":
        base, spacing = _ball_lattice(n)
    elif isinstance(density, str) and density == "cube":
        base, spacing = _cube_lattice(n)
    elif callable(density) and hasattr(density, "support_radius"):
        candidates, weights, spacing = _density_candidates(density, n, required)
    else:
        raise ValidationError(f"Unknown configuration shape '{shape}'")

    if spacing < required:
        raise InfeasibleConfig(
            f"lattice spacing {spacing:.4g} cannot reach separation {required:.4g} for n={n}, c0={c0}"
        )
    amplitude = jitter * (spacing - required) / 2.0

    for attempt in range(max_attempts):
        if candidates is not None:
            keys = rng.exponential(size=candidates.shape[0]) / weights
            base = candidates[np.sort(np.argpartition(keys, n - 1)[:n])]
        positions = base + rng.uniform(-amplitude, amplitude, size=base.shape)
        if min_distance(positions) >= required:
            logger.info("generated n=%d configuration after %d attempt(s)", n, attempt + 1)
            return ParticleSystem(positions, radius, drive, c0, seed)

    raise InfeasibleConfig(f"no configuration with separation {required:.4g} after {max_attempts} attempts")
