"""Experiment orchestration: epsilon sweeps, micro/macro comparison and reports."""

from .compare import (
    ComparisonSeries,
    compare_micro_macro,
    compare_snapshots,
    macro_density_series,
    micro_density_series,
)
from .report import (
    ROW_FIELDS,
    ConvergenceReport,
    ConvergenceRow,
    emit_report,
    load_report,
    render_report_markdown,
)
from .sweep import run_rung, sweep_epsilon

__all__ = [
    "ROW_FIELDS",
    "ComparisonSeries",
    "ConvergenceReport",
    "ConvergenceRow",
    "compare_micro_macro",
    "compare_snapshots",
    "emit_report",
    "load_report",
    "macro_density_series",
    "micro_density_series",
    "render_report_markdown",
    "run_rung",
    "sweep_epsilon",
]
