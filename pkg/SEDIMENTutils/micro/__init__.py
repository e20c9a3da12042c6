"""Microscale sedimentation: configurations, reflections and time stepping."""

from .collocation import collocation_mobility
from .diagnostics import (
    alpha_statistic,
    delta_statistic,
    max_distance_ratio,
    YGrowth,
    min_distance,
    y_growth,
    y_statistic,
)
from .dynamics import DynamicsStep, SimulationTrace, Snapshot, run_micro, step_dynamics
from .pairwise import AmbientField, PairwiseEngine
from .reflections import (
    ReflectionParams,
    ReflectionState,
    VelocitySolution,
    reflection_step,
    settling_speed_single,
    solve_velocities,
    volume_force_velocities,
    zeroth_field,
)
from .system import AssumptionReport, ParticleSystem, generate_configuration, validate_assumptions

__all__ = [
    "AmbientField",
    "AssumptionReport",
    "DynamicsStep",
    "PairwiseEngine",
    "ParticleSystem",
    "ReflectionParams",
    "ReflectionState",
    "SimulationTrace",
    "Snapshot",
    "VelocitySolution",
    "YGrowth",
    "alpha_statistic",
    "collocation_mobility",
    "delta_statistic",
    "generate_configuration",
    "max_distance_ratio",
    "min_distance",
    "reflection_step",
    "run_micro",
    "settling_speed_single",
    "solve_velocities",
    "step_dynamics",
    "validate_assumptions",
    "volume_force_velocities",
    "y_growth",
    "y_statistic",
    "zeroth_field",
]
