"""Tests for micro time stepping and trace recording."""

import numpy as np
import pytest

from SEDIMENTutils.exceptions import CollisionImminent, ValidationError
from SEDIMENTutils.micro.dynamics import run_micro, step_dynamics
from SEDIMENTutils.micro.reflections import VelocitySolution, settling_speed_single, solve_velocities

from ..conftest import make_pair


def test_single_particle_euler_step_is_exact(single_particle):
    step = step_dynamics(single_particle, 0.1, scheme="euler")
    np.testing.assert_allclose(step.system.positions[0], 0.1 * settling_speed_single(1.0), rtol=1e-14)
    assert step.dt == 0.1


def test_pair_settles_faster_than_single_sphere():
    system = make_pair(10.0)
    step = step_dynamics(system, 0.01)
    displacement = step.system.positions - system.positions
    single = 0.01 * np.linalg.norm(settling_speed_single(system.xi))
    assert np.all(displacement[:, 2] < 0)
    assert np.all(np.abs(displacement[:, 2]) > single)


def test_time_step_is_capped(lattice_system):
    solution = solve_velocities(lattice_system)
    step = step_dynamics(lattice_system, 10.0, scheme="euler", solution=solution)
    speed = np.max(np.linalg.norm(solution.velocities, axis=1))
    assert step.dt == pytest.approx(0.1 * lattice_system.d_min / speed, rel=1e-14)


def test_approaching_pair_raises_collision():
    system = make_pair(10.0, axis=(1.0, 0.0, 0.0))
    solution = VelocitySolution(
        velocities=np.array([[1.0, 0.0, 0.0], [-1.0, 0.0, 0.0]]),
        iterations_used=0,
        final_residual=0.0,
        delta_stat=0.0,
        alpha_stat=0.0,
        converged=True,
    )
    dt = 0.4 * system.d_min
    with pytest.raises(CollisionImminent):
        step_dynamics(system, dt, scheme="euler", cfl_frac=1.0, solution=solution)


def test_unknown_scheme(single_particle):
    with pytest.raises(ValidationError):
        step_dynamics(single_particle, 0.1, scheme="leapfrog")


def test_single_particle_run_is_a_straight_line(single_particle):
    seen = []
    trace = run_micro(single_particle, 1.0, 0.05, sink=seen.append)
    assert len(trace.snapshots) == 51
    assert len(seen) == 51
    assert trace.times[-1] == pytest.approx(1.0)
    np.testing.assert_allclose(trace.positions[-1][0], settling_speed_single(1.0), rtol=1e-12)
    np.testing.assert_array_equal(trace.y, np.ones(51))
    assert np.all(trace.residuals == 0.0)


def test_snapshot_cadence(single_particle):
    trace = run_micro(single_particle, 0.5, 0.05, snapshot_every=0.1)
    np.testing.assert_allclose(trace.times, [0.0, 0.1, 0.2, 0.3, 0.4, 0.5], atol=1e-12)


def test_guard_error_carries_partial_trace(single_particle, mocker):
    mocker.patch(
        "SEDIMENTutils.micro.dynamics.step_dynamics", side_effect=CollisionImminent("too close")
    )
    with pytest.raises(CollisionImminent) as info:
        run_micro(single_particle, 1.0, 0.05)
    partial = info.value.partial
    assert len(partial.snapshots) == 1
    assert partial.events[-1]["kind"] == "CollisionImminent"


@pytest.mark.slow
def test_lattice_run_descends_without_aggregation(lattice_512):
    trace = run_micro(lattice_512, 0.5, 0.05, snapshot_every=0.1)
    assert len(trace.snapshots) == 6
    start, end = trace.positions[0], trace.positions[-1]
    assert end[:, 2].mean() < start[:, 2].mean()
    assert trace.y.max() <= 3.0
    assert np.all(np.diff(trace.y) >= 0)
    assert np.all(trace.d_min >= 3 * lattice_512.radius)


def test_growth_statistic_bounds_minimum_distance(lattice_system):
    trace = run_micro(lattice_system, 0.2, 0.05, snapshot_every=0.05)
    assert np.all(trace.d_min * trace.y >= lattice_system.d_min * (1 - 1e-12))
