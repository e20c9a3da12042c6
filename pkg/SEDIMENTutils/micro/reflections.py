"""Method of reflections for the mobility problem of N sedimenting spheres.

Every sphere carries the fixed monopole F = (4 pi / 3N) e and a linear
coefficient A_i.  One reflection replaces each A_i by the surface-averaged
gradient G_i of the field of all other spheres, which cancels the linear
part of the ambient flow on that sphere's boundary.  The constant part needs
no correction: the sphere translates with it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import MaxIterations, ReflectionsDiverged, ValidationError
from ..kernels.sphere import SphereSingularity
from ..utils import as_vec3, ensure_nonnegative, ensure_positive
from .diagnostics import alpha_statistic, delta_statistic
from .pairwise import PairwiseEngine
from .system import DEFAULT_DRIVE, ParticleSystem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReflectionParams:
    k_max: int = 30
    tol: float = 1e-10
    delta_threshold: float = 0.2
    workers: int = 1
    deterministic: bool = True
    strict: bool = False
    backend: str = "numba"

    def __post_init__(self):
        if not isinstance(self.k_max, (int, np.integer)) or self.k_max < 0:
            raise ValidationError(f"k_max must be a non-negative integer, got {self.k_max}")
        ensure_positive("tol", self.tol)
        ensure_positive("delta_threshold", self.delta_threshold)

    def engine(self) -> PairwiseEngine:
        return PairwiseEngine(workers=self.workers, deterministic=self.deterministic, backend=self.backend)


DEFAULT_PARAMS = ReflectionParams()


@dataclass(frozen=True)
class ReflectionState:
    """Linear coefficients after ``iteration`` reflections.

    ``ambient_gradient`` is G(A) for the current coefficients, so the residual
    max_i R |G_i - A_i|_F measures the linear boundary data still uncancelled.
    """

    centers: np.ndarray
    radius: float
    monopole: np.ndarray
    linear_coeffs: np.ndarray
    ambient_gradient: np.ndarray
    residual: float
    iteration: int

    @property
    def singularities(self) -> list[SphereSingularity]:
        return [
            SphereSingularity(center, self.radius, self.monopole, coeff)
            for center, coeff in zip(self.centers, self.linear_coeffs)
        ]


@dataclass(frozen=True)
class VelocitySolution:
    velocities: np.ndarray
    iterations_used: int
    final_residual: float
    delta_stat: float
    alpha_stat: float
    converged: bool
    residual_history: tuple = ()
    state: ReflectionState | None = field(default=None, repr=False)


def settling_speed_single(xi: float, drive=DEFAULT_DRIVE) -> np.ndarray:
    """Stokes settling velocity (2/9) xi^2 e of an isolated sphere."""
    xi = ensure_nonnegative("xi", xi)
    return (2.0 / 9.0) * xi * xi * as_vec3("drive", drive)


def _ambient_gradient(system: ParticleSystem, coeffs, engine: PairwiseEngine) -> np.ndarray:
    radius = system.radius
    return engine.sums(
        system.positions,
        radius,
        system.force,
        coeffs,
        monopole_laplacian=radius**2 / 3.0,
        average_radius=radius,
        mean=False,
    ).gradient


def _residual(radius: float, gradient: np.ndarray, coeffs: np.ndarray) -> float:
    if gradient.shape[0] == 0:
        return 0.0
    return float(radius * np.max(np.linalg.norm(gradient - coeffs, axis=(1, 2))))


def zeroth_field(system: ParticleSystem, params: ReflectionParams = DEFAULT_PARAMS) -> ReflectionState:
    """Superposed translating spheres with no linear corrections."""
    coeffs = np.zeros((system.count, 3, 3))
    gradient = _ambient_gradient(system, None, params.engine())
    return ReflectionState(
        centers=system.positions,
        radius=system.radius,
        monopole=system.force,
        linear_coeffs=coeffs,
        ambient_gradient=gradient,
        residual=_residual(system.radius, gradient, coeffs),
        iteration=0,
    )


def reflection_step(
    state: ReflectionState, system: ParticleSystem, params: ReflectionParams = DEFAULT_PARAMS
) -> ReflectionState:
    """One Jacobi sweep A_i <- G_i(A); monopoles are left untouched."""
    coeffs = state.ambient_gradient.copy()
    gradient = _ambient_gradient(system, coeffs, params.engine())
    return ReflectionState(
        centers=state.centers,
        radius=state.radius,
        monopole=state.monopole,
        linear_coeffs=coeffs,
        ambient_gradient=gradient,
        residual=_residual(state.radius, gradient, coeffs),
        iteration=state.iteration + 1,
    )


def _velocities(system: ParticleSystem, state: ReflectionState, engine: PairwiseEngine) -> np.ndarray:
    radius = system.radius
    ambient = engine.sums(
        system.positions,
        radius,
        system.force,
        state.linear_coeffs,
        monopole_laplacian=radius**2 / 3.0,
        average_radius=radius,
        gradient=False,
    ).mean
    # own sphere: constant trace F/(6 pi R); its correction has zero surface mean
    return system.force / (6.0 * np.pi * radius) + ambient


def solve_velocities(system: ParticleSystem, params: ReflectionParams = DEFAULT_PARAMS) -> VelocitySolution:
    """Iterate reflections to tol * |F| / (6 pi R) and return the surface-mean velocities."""
    delta = delta_statistic(system)
    alpha = alpha_statistic(system)
    if delta >= params.delta_threshold:
        raise ReflectionsDiverged(
            f"delta statistic {delta:.3g} >= threshold {params.delta_threshold:g}; reflections may not contract"
        )

    engine = params.engine()
    target = params.tol * np.linalg.norm(system.force) / (6.0 * np.pi * system.radius)
    state = zeroth_field(system, params)
    history = [state.residual]
    best = state
    increases = 0
    while state.residual > target and state.iteration < params.k_max:
        new = reflection_step(state, system, params)
        increases = increases + 1 if new.residual > state.residual else 0
        history.append(new.residual)
        if increases >= 2:
            raise ReflectionsDiverged(
                f"residual grew on two consecutive reflections (history {history[-3:]})"
            )
        state = new
        if state.residual <= best.residual:
            best = state

    converged = best.residual <= target
    if not converged:
        message = (
            f"reflections stopped at k_max={params.k_max} with residual {best.residual:.3e} "
            f"(target {target:.3e})"
        )
        if params.strict:
            raise MaxIterations(message)
        logger.warning(message)

    velocities = _velocities(system, best, engine)
    logger.info(
        "solved N=%d: %d reflection(s), residual %.3e, delta %.3e",
        system.count,
        best.iteration,
        best.residual,
        delta,
    )
    return VelocitySolution(
        velocities=velocities,
        iterations_used=best.iteration,
        final_residual=best.residual,
        delta_stat=delta,
        alpha_stat=alpha,
        converged=converged,
        residual_history=tuple(history),
        state=best,
    )


def volume_force_velocities(system: ParticleSystem, params: ReflectionParams = DEFAULT_PARAMS) -> np.ndarray:
    """Velocities from forces spread uniformly over the ball volumes.

    The other spheres' fields are sampled at each centre; the own term is the
    single-sphere drift F / (6 pi R) rather than the centre value F / (4 pi R).
    """
    radius = system.radius
    ambient = params.engine().sums(
        system.positions,
        radius,
        system.force,
        monopole_laplacian=radius**2 / 10.0,
        average_radius=0.0,
        gradient=False,
    ).mean
    return system.force / (6.0 * np.pi * radius) + ambient
