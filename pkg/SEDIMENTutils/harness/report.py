"""Convergence report rows and their CSV / JSON / markdown forms."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

from ..exceptions import ReportIOError, ValidationError
from ..schemas.validators import SCHEMA_VERSION
from ..templates.renderer import TemplateRenderer

FORMATS = ("csv", "json")
STATUS_OK = "ok"
STATUS_FAILED = "failed"


@dataclass(frozen=True)
class ConvergenceRow:
    """One ladder rung. Metrics a failed run never reached stay ``None``."""

    n: int
    seed: int
    radius: float
    xi: float
    status: str = STATUS_OK
    error: str = ""
    initial_d_min: Optional[float] = None
    delta: Optional[float] = None
    delta_tilde: Optional[float] = None
    initial_distance: Optional[float] = None
    sup_distance: Optional[float] = None
    refinement_gap: Optional[float] = None
    final_d_min: Optional[float] = None
    max_y: Optional[float] = None
    y_rate: Optional[float] = None
    y_envelope_rate: Optional[float] = None
    y_doubling_time: Optional[float] = None
    volume_force_gap: Optional[float] = None
    mean_iterations: Optional[float] = None
    max_iterations: Optional[int] = None
    max_residual: Optional[float] = None
    max_delta_stat: Optional[float] = None
    snapshots: Optional[int] = None
    wall_time: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK


ROW_FIELDS = tuple(f.name for f in fields(ConvergenceRow))
_INT_FIELDS = {"n", "seed", "max_iterations", "snapshots"}
_STR_FIELDS = {"status", "error"}


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[ConvergenceRow, ...] = ()
    config: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))

    @property
    def failed(self) -> list[ConvergenceRow]:
        return [row for row in self.rows if not row.ok]

    def sup_distances(self) -> list[Optional[float]]:
        return [row.sup_distance for row in self.rows]

    def is_decreasing(self) -> bool:
        values = self.sup_distances()
        if any(v is None for v in values):
            return False
        return all(b < a for a, b in zip(values, values[1:]))

    def total_reduction(self) -> Optional[float]:
        """1 - last/first sup distance; None unless both ends completed."""
        if not self.rows or self.rows[0].sup_distance in (None, 0) or self.rows[-1].sup_distance is None:
            return None
        return 1.0 - self.rows[-1].sup_distance / self.rows[0].sup_distance

    def as_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "config": self.config,
            "rows": [asdict(row) for row in self.rows],
        }


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_value(name: str, text: str):
    if name in _STR_FIELDS:
        return text
    if text == "":
        return None
    if name in _INT_FIELDS:
        return int(text)
    return float(text)


def _to_json(report: ConvergenceReport) -> str:
    return json.dumps(report.as_dict(), indent=2) + "\n"


def _to_csv(report: ConvergenceReport) -> str:
    buffer = io.StringIO()
    buffer.write(f"# schema_version={report.schema_version}\n")
    buffer.write(f"# config={json.dumps(report.config, sort_keys=True)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for row in report.rows:
        writer.writerow([_format_value(getattr(row, name)) for name in ROW_FIELDS])
    return buffer.getvalue()


def _resolve_format(path: Path, fmt: Optional[str]) -> str:
    fmt = (fmt or path.suffix.lstrip(".")).lower()
    if fmt not in FORMATS:
        raise ValidationError(f"Unsupported report format '{fmt}'. Use one of {FORMATS}")
    return fmt


def emit_report(report: ConvergenceReport, path, fmt: Optional[str] = None) -> Path:
    """Write the report with a fixed field order; the format follows ``fmt`` or the suffix."""
    path = Path(path)
    fmt = _resolve_format(path, fmt)
    text = _to_csv(report) if fmt == "csv" else _to_json(report)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise ReportIOError(path, exc.strerror or str(exc)) from exc
    return path


def _rows_from_dicts(items) -> tuple[ConvergenceRow, ...]:
    rows = []
    for item in items:
        unknown = set(item) - set(ROW_FIELDS)
        if unknown:
            raise ValidationError(f"unknown report fields: {sorted(unknown)}")
        rows.append(ConvergenceRow(**item))
    return tuple(rows)


def _check_version(path: Path, version) -> int:
    if version != SCHEMA_VERSION:
        raise ValidationError(f"{path}: unsupported schema_version {version!r}")
    return version


def _parse_csv(path: Path, text: str) -> ConvergenceReport:
    lines = text.splitlines()
    meta = {}
    while lines and lines[0].startswith("#"):
        key, _, value = lines.pop(0)[1:].strip().partition("=")
        meta[key] = value
    version = _check_version(path, int(meta.get("schema_version", -1)))
    config = json.loads(meta["config"]) if "config" in meta else {}
    reader = csv.reader(lines)
    header = next(reader, None)
    if header is None or tuple(header) != ROW_FIELDS:
        raise ValidationError(f"{path}: unexpected report header {header}")
    rows = [
        ConvergenceRow(**{name: _parse_value(name, text) for name, text in zip(ROW_FIELDS, record)})
        for record in reader
        if record
    ]
    return ConvergenceReport(tuple(rows), config, version)


def load_report(path, fmt: Optional[str] = None) -> ConvergenceReport:
    """Read a report written by ``emit_report``."""
    path = Path(path)
    fmt = _resolve_format(path, fmt)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ReportIOError(path, exc.strerror or str(exc)) from exc
    if fmt == "csv":
        return _parse_csv(path, text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportIOError(path, f"invalid JSON ({exc})") from exc
    version = _check_version(path, data.get("schema_version"))
    return ConvergenceReport(_rows_from_dicts(data.get("rows", [])), data.get("config", {}), version)


def render_report_markdown(report: ConvergenceReport, renderer: TemplateRenderer | None = None) -> str:
    renderer = renderer or TemplateRenderer()
    reduction = report.total_reduction()
    return renderer.render(
        "report.md.j2",
        {
            "report": report,
            "fields": ROW_FIELDS,
            "decreasing": report.is_decreasing(),
            "reduction": None if reduction is None or math.isnan(reduction) else reduction,
        },
    )
