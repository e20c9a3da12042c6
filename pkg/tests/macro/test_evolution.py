"""Tests for macro runs, the drop benchmark and the large-xi limit."""

import numpy as np
import pytest

from SEDIMENTutils.macro.densities import AnalyticDensity
from SEDIMENTutils.macro.evolution import large_xi_deviation, run_macro, uniform_ball_drop_report
from SEDIMENTutils.macro.markers import init_markers


def _mirror_sorted(points):
    rounded = np.round(points, 8)
    return points[np.lexsort(rounded.T[::-1])]


def test_run_records_snapshots_and_conserves_mass(mollified_ball):
    cloud = init_markers(mollified_ball, 0.25)
    seen = []
    run = run_macro(cloud, 0.5, 0.05, snapshot_every=0.1, delta=0.5, sink=seen.append)
    np.testing.assert_allclose(run.times, [0.0, 0.1, 0.2, 0.3, 0.4, 0.5], atol=1e-12)
    assert len(seen) == 6
    assert np.sum(run.final.weights) == np.sum(cloud.weights)
    assert run.mass_drift() <= 5e-3
    for snap in run.snapshots:
        assert snap.scalars()["marker_count"] == cloud.count


def test_deposited_peak_is_conserved():
    density = AnalyticDensity("mollified_ball", radius=1.0, amplitude=0.01)
    cloud = init_markers(density, 0.1)
    run = run_macro(cloud, 0.5, 0.05, snapshot_every=0.25, delta=0.4)
    assert run.mass_drift() <= 5e-3
    assert run.sup_variation() <= 0.05


def test_run_without_grid(mollified_ball):
    run = run_macro(init_markers(mollified_ball, 0.3), 0.2, 0.1)
    assert all(grid is None for grid in run.densities)
    assert run.mass_drift() == 0.0
    assert len(run.snapshots) == 51


def test_reflection_symmetry_is_preserved(mollified_ball):
    cloud = init_markers(mollified_ball, 0.25)
    run = run_macro(cloud, 0.3, 0.1, snapshot_every=0.3)
    final = run.final.absolute_positions
    mirrored = final * np.array([-1.0, 1.0, 1.0])
    np.testing.assert_allclose(_mirror_sorted(mirrored), _mirror_sorted(final), atol=1e-10)


def test_large_xi_limit_is_monotone(mollified_ball):
    rows = large_xi_deviation(mollified_ball, 0.25, xis=(2.0, 4.0, 8.0), t_prime=0.5, steps=10)
    assert [xi for xi, _ in rows] == [2.0, 4.0, 8.0]
    deviations = [dev for _, dev in rows]
    assert deviations[0] > deviations[1] > deviations[2]


def test_drop_report_linearity_on_coarse_lattice():
    report = uniform_ball_drop_report(a=1.0, h=0.2, steps=2)
    assert report.amplitude_ratio == pytest.approx(2.0, rel=1e-12)
    assert report.mass == pytest.approx(4 * np.pi / 3, rel=0.2)
    assert report.com_velocity[2] < 0
    data = report.as_dict()
    assert isinstance(data["center_velocity"], list)


@pytest.mark.slow
def test_falling_ball_benchmark():
    report = uniform_ball_drop_report(a=1.0, amplitude=1.0)
    assert report.h == pytest.approx(0.05)
    assert report.relative_error <= 0.02
    assert report.boundary_rms <= 0.02
    assert report.amplitude_ratio == pytest.approx(2.0, rel=1e-12)
