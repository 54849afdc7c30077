"""Repeated position measurement and the classical limit of trajectories.

A particle guided by its wave is observed N times at regular intervals; each
observation re-prepares the wave as a Gaussian of width ``sigma_meas``
centered on the observed phase point. Between observations the trajectory
follows the quantum-corrected flow (``zeno_run_flow``, with Q taken either
from the frozen post-measurement snapshot or from the packet's true
closed-form evolution) or a full grid propagation with a Bohmian trajectory
dragged through it (``zeno_run_wavefunction``). As N grows the quantum
force never has room to build up and the trajectory pinches onto the
classical one — the trajectory-level Zeno effect. The same mechanism in two
dimensions produces straight cloud-chamber-style tracks from an isotropically
random initial momentum (``mott_track``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bohm import integrate_bohm_trajectory
from .core import ComplexField, SpatialGrid, SystemConfig, TimeWindow
from .flows import GaussianQuantumTerm, quantum_flow, split_phase
from .gaussian import GaussianWavepacket
from .potentials import Free, Potential
from .propagators import reference_evolve

__all__ = [
    "MeasurementSchedule",
    "reprepare",
    "ZenoResult",
    "zeno_run_flow",
    "zeno_run_wavefunction",
    "MottTrack",
    "mott_track",
]


@dataclass(frozen=True)
class MeasurementSchedule:
    """N equally spaced observations of width sigma_meas over a window.

    ``n_observations`` counts the inter-observation segments: the wave is
    prepared at t_start and re-prepared at the n-1 interior edges. q_model
    selects the quantum force between observations: "frozen" pins Q to the
    post-measurement snapshot, "thawed" lets the packet evolve in closed form
    (quadratic potentials only).
    """

    t_start: float
    t_end: float
    n_observations: int
    sigma_meas: float
    q_model: str = "frozen"

    def __post_init__(self) -> None:
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if self.n_observations < 1:
            raise ValueError("n_observations must be >= 1")
        if not self.sigma_meas > 0:
            raise ValueError("sigma_meas must be positive")
        if self.q_model not in ("frozen", "thawed"):
            raise ValueError(
                f"q_model must be 'frozen' or 'thawed', got {self.q_model!r}"
            )

    @cached_property
    def edges(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_observations + 1)


def reprepare(
    x_obs, p_obs, sigma_meas: float, config: SystemConfig
) -> tuple[GaussianWavepacket, ...]:
    """Post-measurement state: one Gaussian of width sigma_meas per dof."""
    if not sigma_meas > 0:
        raise ValueError("sigma_meas must be positive")
    x = np.atleast_1d(np.asarray(x_obs, dtype=float))
    p = np.atleast_1d(np.asarray(p_obs, dtype=float))
    if x.shape != (config.dof,) or p.shape != (config.dof,):
        raise ValueError(
            f"x_obs and p_obs must have shape ({config.dof},), "
            f"got {x.shape} and {p.shape}"
        )
    return tuple(
        GaussianWavepacket.from_width(
            center=float(xj),
            sigma=sigma_meas,
            momentum=float(pj),
            config=SystemConfig(hbar=config.hbar, masses=(mj,)),
        )
        for xj, pj, mj in zip(x, p, config.masses)
    )


@dataclass
class ZenoResult:
    """Observed trajectory under repeated measurement vs. the classical one."""

    observation_times: np.ndarray
    positions: np.ndarray  # (n_observations + 1, dof)
    momenta: np.ndarray
    classical_positions: np.ndarray
    classical_momenta: np.ndarray

    @property
    def errors(self) -> np.ndarray:
        """Per-edge sup distance to the classical flow over (x, p)."""
        gap_x = np.abs(self.positions - self.classical_positions)
        gap_p = np.abs(self.momenta - self.classical_momenta)
        return np.max(np.concatenate([gap_x, gap_p], axis=1), axis=1)

    @property
    def endpoint_error(self) -> float:
        return float(self.errors[-1])


def zeno_run_flow(
    potential: Potential,
    schedule: MeasurementSchedule,
    z0,
    config: SystemConfig,
    *,
    steps_per_segment: int = 64,
) -> ZenoResult:
    """Quantum-corrected flow with re-preparation at every observation.

    Each segment starts with the packet centered on the current phase point
    (the particle sits exactly at its post-measurement wave's center), so the
    quantum force vanishes at the segment start and only grows as the
    trajectory slides off center.
    """
    if steps_per_segment < 1:
        raise ValueError("steps_per_segment must be >= 1")
    z0 = np.asarray(z0, dtype=float)
    x, p = split_phase(z0)
    if x.size != config.dof:
        raise ValueError(f"phase point has {x.size} dof, config has {config.dof}")

    edges = schedule.edges
    n = schedule.n_observations
    positions = np.empty((n + 1, config.dof))
    momenta = np.empty_like(positions)
    positions[0], momenta[0] = x, p
    z = z0
    for k in range(n):
        xk, pk = split_phase(z)
        term = GaussianQuantumTerm(
            packets=reprepare(xk, pk, schedule.sigma_meas, config),
            config=config,
            mode=schedule.q_model,
            potential=potential if schedule.q_model == "thawed" else None,
            t_ref=float(edges[k]),
        )
        segment = quantum_flow(
            potential, term, config, z,
            float(edges[k]), float(edges[k + 1]), steps_per_segment,
        )
        z = segment.endpoint
        positions[k + 1], momenta[k + 1] = split_phase(z)

    # RK4 for the reference as well: its O(dt^4) error sits far below the
    # measurement-induced gaps this result is meant to expose.
    reference = quantum_flow(
        potential, None, config, z0,
        schedule.t_start, schedule.t_end, n * steps_per_segment,
    )
    classical_x = reference.positions[::steps_per_segment]
    classical_p = reference.momenta[::steps_per_segment]
    return ZenoResult(
        observation_times=edges,
        positions=positions,
        momenta=momenta,
        classical_positions=classical_x,
        classical_momenta=classical_p,
    )


def zeno_run_wavefunction(
    potential: Potential,
    schedule: MeasurementSchedule,
    initial: GaussianWavepacket,
    x_start: float,
    config: SystemConfig,
    *,
    grid: SpatialGrid,
    slices_per_segment: int = 8,
    steps_per_slice: int = 8,
    trajectory_substeps: int = 4,
) -> ZenoResult:
    """Grid-level analogue: propagate the wave, drag a Bohmian trajectory.

    The trajectory starts at ``x_start`` inside ``initial`` (it need not be
    the packet center). Each observation re-prepares a Gaussian of width
    sigma_meas at the trajectory's current phase point and the propagation
    restarts from the collapsed state. The classical reference launches from
    (x_start, p) with p the initial wave's phase momentum at x_start.
    """
    if config.dof != 1:
        raise ValueError("wavefunction-level runs are one-dimensional")
    edges = schedule.edges
    n = schedule.n_observations
    positions = np.empty((n + 1, 1))
    momenta = np.empty_like(positions)

    x = float(x_start)
    p = float(initial.phase_momentum(x, config))
    positions[0, 0], momenta[0, 0] = x, p
    z0 = np.array([x, p])

    packet = initial
    for k in range(n):
        if k > 0:
            packet = reprepare(x, p, schedule.sigma_meas, config)[0]
        field = packet.sample(grid, config)
        evolution = reference_evolve(
            potential, field,
            TimeWindow(float(edges[k]), float(edges[k + 1]), slices_per_segment),
            config, steps_per_slice=steps_per_slice,
        )
        trajectory = integrate_bohm_trajectory(
            evolution, x, config, steps_per_interval=trajectory_substeps
        )
        x, p = trajectory.endpoint
        positions[k + 1, 0], momenta[k + 1, 0] = x, p

    reference = quantum_flow(
        potential, None, config, z0,
        schedule.t_start, schedule.t_end, n * slices_per_segment * steps_per_slice,
    )
    stride = slices_per_segment * steps_per_slice
    return ZenoResult(
        observation_times=edges,
        positions=positions,
        momenta=momenta,
        classical_positions=reference.positions[::stride],
        classical_momenta=reference.momenta[::stride],
    )


@dataclass
class MottTrack:
    """A single observed 2-D track from an isotropic initial momentum."""

    seed: int
    times: np.ndarray
    positions: np.ndarray  # (n_observations + 1, 2)
    direction: np.ndarray  # unit best-fit direction through the origin
    straightness: float  # max perpendicular deviation / track length


def mott_track(
    *,
    n_observations: int = 64,
    sigma_meas: float = 0.5,
    momentum: float = 1.0,
    duration: float = 4.0,
    seed: int = 0,
    config: SystemConfig | None = None,
    steps_per_segment: int = 32,
) -> MottTrack:
    """Why cloud-chamber tracks are straight, in miniature.

    A free 2-D particle starts at the origin with a seeded random direction
    (the isotropic wave supplies no preferred one); repeated position
    measurements of width sigma_meas re-center its wave on the trajectory.
    The segment quantum force points along the displacement from the last
    collapse, so it never turns the track: the observed chain of spots lies
    on a straight ray.
    """
    if config is None:
        config = SystemConfig(hbar=1.0, masses=(1.0, 1.0))
    if config.dof != 2:
        raise ValueError("Mott tracks are two-dimensional")
    rng = np.random.default_rng(seed)
    angle = rng.uniform(0.0, 2.0 * np.pi)
    z0 = np.array([0.0, 0.0, momentum * np.cos(angle), momentum * np.sin(angle)])
    schedule = MeasurementSchedule(
        t_start=0.0, t_end=duration,
        n_observations=n_observations, sigma_meas=sigma_meas,
    )
    result = zeno_run_flow(
        Free(), schedule, z0, config, steps_per_segment=steps_per_segment
    )
    points = result.positions
    # best-fit line through the origin: leading right-singular vector
    _, _, vt = np.linalg.svd(points, full_matrices=False)
    direction = vt[0]
    perpendicular = points - np.outer(points @ direction, direction)
    length = float(np.linalg.norm(points[-1]))
    straightness = float(np.max(np.linalg.norm(perpendicular, axis=1)) / length)
    return MottTrack(
        seed=seed,
        times=result.observation_times,
        positions=points,
        direction=direction,
        straightness=straightness,
    )
