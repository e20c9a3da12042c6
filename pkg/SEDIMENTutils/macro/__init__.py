"""Blob-marker solver for the macroscopic transport-Stokes system."""

from .densities import AnalyticDensity, smooth_step
from .evolution import (
    DropReport,
    MacroRun,
    MacroSnapshot,
    large_xi_deviation,
    run_macro,
    uniform_ball_drop_report,
)
from .markers import MarkerCloud, blob_velocity, init_markers, marker_velocities, step_macro

__all__ = [
    "AnalyticDensity",
    "DropReport",
    "MacroRun",
    "MacroSnapshot",
    "MarkerCloud",
    "blob_velocity",
    "init_markers",
    "large_xi_deviation",
    "marker_velocities",
    "run_macro",
    "smooth_step",
    "step_macro",
    "uniform_ball_drop_report",
]
