"""Tests for convergence reports and their file formats."""

import dataclasses
import json

import pytest

from SEDIMENTutils.exceptions import ReportIOError, ValidationError
from SEDIMENTutils.harness.report import (
    ROW_FIELDS,
    STATUS_FAILED,
    ConvergenceReport,
    ConvergenceRow,
    emit_report,
    load_report,
    render_report_markdown,
)


@pytest.fixture
def report():
    rows = (
        ConvergenceRow(
            n=512, seed=7, radius=1 / 512, xi=1.0, initial_d_min=0.07, delta=0.28, delta_tilde=1.12,
            initial_distance=0.31, sup_distance=0.42, refinement_gap=0.05, final_d_min=0.069,
            max_y=1.02, y_rate=0.04, y_envelope_rate=0.05, volume_force_gap=0.012, mean_iterations=2.5, max_iterations=3, max_residual=1e-11,
            max_delta_stat=4e-4, snapshots=51, wall_time=3.25,
        ),
        ConvergenceRow(
            n=2048, seed=7, radius=1 / 2048, xi=1.0, status=STATUS_FAILED,
            error="CollisionImminent: step would bring particles too close", initial_d_min=0.04,
            final_d_min=0.001, max_y=3.5, snapshots=12, wall_time=10.0,
        ),
    )
    return ConvergenceReport(rows, {"c0": 0.1, "epsilon_ladder": [512, 2048], "beta": 3.0})


def test_field_order_is_fixed():
    assert ROW_FIELDS[:6] == ("n", "seed", "radius", "xi", "status", "error")
    assert ROW_FIELDS[-1] == "wall_time"


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_round_trip(report, tmp_path, fmt):
    path = emit_report(report, tmp_path / f"report.{fmt}")
    assert load_report(path) == report


def test_csv_and_json_agree(report, tmp_path):
    from_csv = load_report(emit_report(report, tmp_path / "r.csv"))
    from_json = load_report(emit_report(report, tmp_path / "r.json"))
    for a, b in zip(from_csv.rows, from_json.rows):
        assert dataclasses.asdict(a) == dataclasses.asdict(b)
    assert from_csv.config == from_json.config


def test_empty_report_is_header_only(tmp_path):
    path = emit_report(ConvergenceReport(), tmp_path / "empty.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "# schema_version=1"
    assert lines[2] == ",".join(ROW_FIELDS)
    assert len(lines) == 3
    assert load_report(path).rows == ()


def test_explicit_format_overrides_suffix(report, tmp_path):
    path = emit_report(report, tmp_path / "report.txt", fmt="json")
    assert json.loads(path.read_text())["schema_version"] == 1
    with pytest.raises(ValidationError):
        emit_report(report, tmp_path / "report.txt")


def test_io_failure_names_the_path(report, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(ReportIOError) as info:
        emit_report(report, blocker / "report.csv")
    assert "report.csv" in str(info.value)
    with pytest.raises(ReportIOError):
        load_report(tmp_path / "missing.json")


def test_version_mismatch_is_rejected(report, tmp_path):
    path = emit_report(report, tmp_path / "r.json")
    data = json.loads(path.read_text())
    data["schema_version"] = 2
    path.write_text(json.dumps(data))
    with pytest.raises(ValidationError):
        load_report(path)


def test_summary_helpers(report):
    assert [row.n for row in report.failed] == [2048]
    assert report.sup_distances() == [0.42, None]
    assert not report.is_decreasing()
    assert report.total_reduction() is None
    done = ConvergenceReport(
        tuple(dataclasses.replace(row, status="ok", sup_distance=value)
              for row, value in zip(report.rows, (0.4, 0.1)))
    )
    assert done.is_decreasing()
    assert done.total_reduction() == pytest.approx(0.75)


def test_markdown_lists_rows_and_failures(report):
    text = render_report_markdown(report)
    assert "512" in text
    assert "CollisionImminent" in text


def test_markdown_shows_growth_and_volume_force_columns(report):
    text = render_report_markdown(report)
    assert "Y doubling time" in text
    assert "volume-force gap" in text
    assert "| 0.04 | - | 0.012 |" in text
