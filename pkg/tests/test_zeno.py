"""Tests for measurement schedules, re-preparation, and Zeno runs."""

import numpy as np
import pytest

from bohmflow.core import SpatialGrid, SystemConfig
from bohmflow.gaussian import GaussianWavepacket
from bohmflow.numerics import fit_convergence_order
from bohmflow.potentials import Free, Harmonic
from bohmflow.zeno import (
    MeasurementSchedule,
    mott_track,
    reprepare,
    zeno_run_flow,
    zeno_run_wavefunction,
)

CFG = SystemConfig(hbar=1.0, masses=(1.0,))
HARMONIC = Harmonic(mass=1.0, omega=1.0)


def test_schedule_edges_and_validation():
    schedule = MeasurementSchedule(0.0, 2.0, 4, 0.5)
    np.testing.assert_allclose(schedule.edges, [0.0, 0.5, 1.0, 1.5, 2.0])
    with pytest.raises(ValueError, match="t_end"):
        MeasurementSchedule(1.0, 1.0, 4, 0.5)
    with pytest.raises(ValueError, match="n_observations"):
        MeasurementSchedule(0.0, 1.0, 0, 0.5)
    with pytest.raises(ValueError, match="sigma_meas"):
        MeasurementSchedule(0.0, 1.0, 4, -0.5)
    with pytest.raises(ValueError, match="q_model"):
        MeasurementSchedule(0.0, 1.0, 4, 0.5, q_model="liquid")


def test_reprepare_center_and_quantum_potential():
    (packet,) = reprepare(0.3, 1.2, 0.5, CFG)
    assert packet.center == pytest.approx(0.3)
    assert packet.momentum == pytest.approx(1.2)
    assert packet.sigma(CFG) == pytest.approx(0.5)
    assert packet.norm(CFG) == pytest.approx(1.0, abs=1e-12)
    # Q at the packet center is hbar^2 / (4 m sigma^2) = 1 for sigma = 1/2
    assert packet.quantum_potential_at(0.3, CFG) == pytest.approx(1.0, rel=1e-12)
    assert packet.quantum_potential_gradient_at(0.3, CFG) == pytest.approx(0.0, abs=1e-13)


def test_reprepare_multidof_and_validation():
    cfg = SystemConfig(hbar=1.0, masses=(1.0, 2.0))
    packets = reprepare([1.0, -2.0], [0.5, 0.0], 0.4, cfg)
    assert len(packets) == 2
    assert packets[0].center == 1.0 and packets[1].center == -2.0
    with pytest.raises(ValueError, match="shape"):
        reprepare([1.0], [0.5, 0.0], 0.4, cfg)
    with pytest.raises(ValueError, match="sigma_meas"):
        reprepare(0.0, 0.0, 0.0, CFG)


def test_free_particle_at_rest_is_exactly_classical():
    # At rest at the packet center the quantum force vanishes identically
    # along the (stationary) trajectory for every observation count.
    schedule = MeasurementSchedule(0.0, 2.0, 8, 0.5)
    result = zeno_run_flow(Free(), schedule, [0.7, 0.0], CFG)
    assert result.endpoint_error < 1e-13
    np.testing.assert_allclose(result.positions[:, 0], 0.7, atol=1e-13)


def test_thawed_model_rides_the_packet_center():
    # With the true (thawed) Q, a center-launched trajectory in a quadratic
    # potential is exactly classical, whatever the observation count.
    schedule = MeasurementSchedule(0.0, np.pi / 2, 5, 0.5, q_model="thawed")
    result = zeno_run_flow(HARMONIC, schedule, [1.0, 0.0], CFG)
    assert result.endpoint_error < 1e-8


def test_zeno_error_decays_with_observation_count():
    errors = []
    counts = np.array([4, 8, 16, 32, 64])
    for n in counts:
        schedule = MeasurementSchedule(0.0, np.pi / 2, int(n), 0.5)
        result = zeno_run_flow(HARMONIC, schedule, [1.0, 0.0], CFG)
        errors.append(result.endpoint_error)
    errors = np.array(errors)
    assert np.all(np.diff(errors) < 0)
    assert errors[-1] < errors[0] / 8.0
    order = fit_convergence_order(1.0 / counts, errors)
    assert order == pytest.approx(1.0, abs=0.2)


def test_unobserved_run_stays_far_from_classical():
    lone = MeasurementSchedule(0.0, np.pi / 2, 1, 0.5)
    watched = MeasurementSchedule(0.0, np.pi / 2, 64, 0.5)
    err_lone = zeno_run_flow(HARMONIC, lone, [1.0, 0.0], CFG).endpoint_error
    err_watched = zeno_run_flow(HARMONIC, watched, [1.0, 0.0], CFG).endpoint_error
    assert err_lone > 0.05
    assert err_watched < err_lone / 10.0


def test_classical_reference_matches_exact_rotation():
    schedule = MeasurementSchedule(0.0, np.pi / 2, 4, 0.5)
    result = zeno_run_flow(HARMONIC, schedule, [1.0, 0.0], CFG)
    ts = result.observation_times
    np.testing.assert_allclose(result.classical_positions[:, 0], np.cos(ts), atol=1e-8)
    np.testing.assert_allclose(result.classical_momenta[:, 0], -np.sin(ts), atol=1e-8)


def test_wavefunction_level_zeno():
    # Breathing packet (sigma = 1/2 in a unit oscillator), trajectory
    # launched off center: unobserved it follows the breathing wave; under
    # more and more observations it hugs the classical flow. The launch
    # point feels an O(1) quantum force, so the residual error is the
    # segment-0 kick, of size |grad Q| T / N.
    grid = SpatialGrid(-8.0, 8.0, 1024)
    initial = GaussianWavepacket.from_width(
        center=0.0, sigma=0.5, momentum=0.0, config=CFG
    )
    errs = {}
    for n in (1, 8, 16):
        schedule = MeasurementSchedule(0.0, 1.0, n, 0.5)
        errs[n] = zeno_run_wavefunction(
            HARMONIC, schedule, initial, 0.5, CFG, grid=grid
        ).endpoint_error
    assert errs[1] > 0.3
    assert errs[16] < errs[8] < errs[1]
    assert errs[8] < errs[1] / 3.0
    assert errs[16] < errs[1] / 6.0


def test_wavefunction_run_requires_one_dof():
    grid = SpatialGrid(-8.0, 8.0, 64)
    cfg = SystemConfig(hbar=1.0, masses=(1.0, 1.0))
    packet = GaussianWavepacket.from_width(
        center=0.0, sigma=0.5, momentum=0.0, config=CFG
    )
    with pytest.raises(ValueError, match="one-dimensional"):
        zeno_run_wavefunction(
            Free(), MeasurementSchedule(0.0, 1.0, 2, 0.5), packet, 0.0, cfg, grid=grid
        )


def test_mott_track_is_straight():
    for seed in range(4):
        track = mott_track(seed=seed)
        assert track.straightness < 1e-10
        assert np.linalg.norm(track.direction) == pytest.approx(1.0, abs=1e-12)
        # expelled outward: the track leaves the origin at least ballistically
        assert np.linalg.norm(track.positions[-1]) > 4.0


def test_mott_track_determinism_and_seed_variation():
    a = mott_track(seed=11)
    b = mott_track(seed=11)
    assert np.array_equal(a.positions, b.positions)
    c = mott_track(seed=12)
    assert not np.allclose(a.positions[-1], c.positions[-1])


def test_mott_track_validation():
    with pytest.raises(ValueError, match="two-dimensional"):
        mott_track(config=CFG)
