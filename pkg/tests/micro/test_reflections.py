"""Tests for the method of reflections."""

import logging

import numpy as np
import pytest

from SEDIMENTutils.exceptions import MaxIterations, ReflectionsDiverged, ValidationError
from SEDIMENTutils.kernels.sphere import SphereSingularity
from SEDIMENTutils.micro.collocation import collocation_mobility
from SEDIMENTutils.micro.diagnostics import delta_statistic
from SEDIMENTutils.micro.reflections import (
    ReflectionParams,
    reflection_step,
    settling_speed_single,
    solve_velocities,
    volume_force_velocities,
    zeroth_field,
)
from SEDIMENTutils.micro.system import ParticleSystem, generate_configuration

from ..conftest import make_pair

DOWN = np.array([0.0, 0.0, -1.0])


def test_settling_speed_examples():
    np.testing.assert_allclose(settling_speed_single(1.0), (2.0 / 9.0) * DOWN)
    np.testing.assert_allclose(settling_speed_single(3.0, drive=(1.0, 0.0, 0.0)), [2.0, 0.0, 0.0])
    np.testing.assert_array_equal(settling_speed_single(0.0), np.zeros(3))
    with pytest.raises(ValidationError):
        settling_speed_single(-1.0)


@pytest.mark.parametrize("xi", [0.5, 1.0, 2.0])
def test_single_particle_settles_at_stokes_speed(xi):
    system = generate_configuration(1, 0.1, seed=0, xi=xi)
    solution = solve_velocities(system)
    np.testing.assert_allclose(solution.velocities[0], settling_speed_single(xi), rtol=1e-12)
    assert solution.iterations_used == 0
    assert solution.final_residual == 0.0
    assert solution.converged


def test_zeroth_residual_vanishes_for_single_particle(single_particle):
    assert zeroth_field(single_particle).residual == 0.0


def test_pair_zeroth_residual_is_neighbour_gradient():
    system = make_pair(10.0)
    state = zeroth_field(system)
    radius = system.radius
    neighbour = SphereSingularity(system.positions[1], radius, system.force)
    expected = radius * np.linalg.norm(neighbour.faxen_gradient(system.positions[0], radius))
    assert state.residual == pytest.approx(expected, rel=1e-12)
    np.testing.assert_array_equal(state.linear_coeffs, np.zeros((2, 3, 3)))


def test_reflection_keeps_monopoles_and_contracts():
    system = make_pair(10.0)
    state = zeroth_field(system)
    nxt = reflection_step(state, system)
    np.testing.assert_array_equal(nxt.monopole, state.monopole)
    np.testing.assert_array_equal(nxt.linear_coeffs, state.ambient_gradient)
    assert nxt.iteration == 1
    ratio = nxt.residual / state.residual
    assert ratio <= 5 * delta_statistic(system)
    assert ratio < 0.1


def test_pair_matches_collocation_and_settles_faster():
    system = make_pair(10.0)
    solution = solve_velocities(system)
    reference = collocation_mobility(system.positions, system.radius, system.force)
    for got, want in zip(solution.velocities, reference):
        assert np.linalg.norm(got - want) <= 1e-2 * np.linalg.norm(want)
    single = np.linalg.norm(settling_speed_single(system.xi))
    assert np.all(np.linalg.norm(solution.velocities, axis=1) > single)


def test_tight_cluster_is_refused():
    radius = 1.0 / 7.0
    offsets = 2.2 * radius * np.vstack([np.zeros(3), np.eye(3), -np.eye(3)])
    system = ParticleSystem(offsets, radius)
    with pytest.raises(ReflectionsDiverged):
        solve_velocities(system)


def test_k_max_zero_strict_raises():
    with pytest.raises(MaxIterations):
        solve_velocities(make_pair(10.0), ReflectionParams(k_max=0, strict=True))


def test_k_max_zero_warns_and_returns_zeroth_velocities(caplog):
    with caplog.at_level(logging.WARNING, logger="SEDIMENTutils.micro.reflections"):
        solution = solve_velocities(make_pair(10.0), ReflectionParams(k_max=0))
    assert not solution.converged
    assert solution.iterations_used == 0
    assert "k_max=0" in caplog.text


def test_invalid_parameters():
    with pytest.raises(ValidationError):
        ReflectionParams(k_max=-1)
    with pytest.raises(ValidationError):
        ReflectionParams(tol=0.0)


def test_lattice_reflections_contract(lattice_512):
    delta = delta_statistic(lattice_512)
    assert delta <= 0.05
    solution = solve_velocities(lattice_512)
    history = np.asarray(solution.residual_history)
    assert solution.converged
    assert history[min(3, len(history) - 1)] <= history[0] / 10
    for before, after in zip(history[:-1], history[1:]):
        assert after <= 5 * delta * before


def test_worker_count_does_not_change_velocities(lattice_system):
    one = solve_velocities(lattice_system, ReflectionParams(workers=1))
    two = solve_velocities(lattice_system, ReflectionParams(workers=2))
    np.testing.assert_array_equal(one.velocities, two.velocities)
    assert one.residual_history == two.residual_history


def test_volume_force_velocities_close_to_rigid_spheres():
    system = make_pair(20.0)
    rigid = solve_velocities(system).velocities
    smeared = volume_force_velocities(system)
    np.testing.assert_allclose(smeared, rigid, rtol=1e-2, atol=1e-12)


def test_volume_force_single_particle(single_particle):
    np.testing.assert_allclose(
        volume_force_velocities(single_particle)[0], settling_speed_single(1.0), rtol=1e-14
    )


def test_velocities_follow_particle_relabelling(lattice_system, rng):
    order = rng.permutation(lattice_system.count)
    base = solve_velocities(lattice_system).velocities
    permuted = solve_velocities(lattice_system.with_positions(lattice_system.positions[order])).velocities
    np.testing.assert_allclose(permuted, base[order], rtol=1e-12, atol=1e-15)


def test_velocities_are_translation_invariant(lattice_system):
    base = solve_velocities(lattice_system).velocities
    shifted = lattice_system.with_positions(lattice_system.positions + np.array([3.0, -1.5, 0.25]))
    np.testing.assert_allclose(solve_velocities(shifted).velocities, base, rtol=1e-12, atol=1e-15)


def test_pair_symmetric_about_drive_axis():
    # half-turn about e swaps the two spheres
    system = ParticleSystem(np.array([[0.1, 0.05, 0.2], [-0.1, -0.05, 0.2]]), 0.02)
    v = solve_velocities(system).velocities
    half_turn = np.diag([-1.0, -1.0, 1.0])
    np.testing.assert_allclose(v[1], half_turn @ v[0], rtol=0, atol=1e-12 * np.linalg.norm(v[0]))
    assert v[0, 2] < 0
