"""Classical and quantum-corrected Hamiltonian flows in phase space.

Phase-space points are flat arrays z = (x_1..x_n, p_1..p_n). The classical
flow is Stormer-Verlet (symplectic, 2nd order, with cubic-Hermite dense
output); the quantum-corrected flow adds the gradient of a quantum potential
term to the force and integrates with RK4 (the force may be explicitly
time-dependent, which breaks the Verlet splitting).

``AlgorithmFamily`` packages a one-step map k(z, t, dt) together with the
vector field it claims to integrate; ``trotter_compose`` refuses to compose a
family whose map is not tangent to its field at dt = 0 (checked by central
differences), which is the practical content of requiring an algorithm before
composing its steps.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Callable

import numpy as np

from .core import SystemConfig, TimeWindow
from .gaussian import GaussianWavepacket
from .potentials import Potential

__all__ = [
    "AlgorithmConsistencyError",
    "phase_point",
    "split_phase",
    "PhaseTrajectory",
    "classical_flow",
    "quantum_flow",
    "GaussianQuantumTerm",
    "AlgorithmFamily",
    "euler_algorithm",
    "verlet_algorithm",
    "algorithm_derivative_defect",
    "trotter_compose",
    "symplectic_defect",
    "suspend",
]


class AlgorithmConsistencyError(RuntimeError):
    """A step family is not tangent to its advertised vector field."""


def phase_point(x, p) -> np.ndarray:
    """Pack positions and momenta into a flat phase-space point."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    if x.shape != p.shape:
        raise ValueError("x and p must have the same shape")
    return np.concatenate([x, p])


def split_phase(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    z = np.asarray(z, dtype=float)
    if z.ndim != 1 or z.size % 2:
        raise ValueError(f"phase point must be a flat even-length array, got {z.shape}")
    n = z.size // 2
    return z[:n], z[n:]


@dataclass
class PhaseTrajectory:
    """Discrete flow samples with cubic-Hermite dense output."""

    times: np.ndarray
    positions: np.ndarray  # (n_steps + 1, dof)
    momenta: np.ndarray
    d_positions: np.ndarray  # stored xdot, pdot for the Hermite interpolant
    d_momenta: np.ndarray

    @property
    def endpoint(self) -> np.ndarray:
        return np.concatenate([self.positions[-1], self.momenta[-1]])

    def at(self, t: float) -> np.ndarray:
        """Phase point at an arbitrary time inside the trajectory window."""
        ts = self.times
        if not ts[0] <= t <= ts[-1]:
            raise ValueError(f"t={t} outside [{ts[0]}, {ts[-1]}]")
        k = min(int(np.searchsorted(ts, t, side="right")) - 1, ts.size - 2)
        h = ts[k + 1] - ts[k]
        s = (t - ts[k]) / h
        h00 = (1.0 + 2.0 * s) * (1.0 - s) ** 2
        h10 = s * (1.0 - s) ** 2
        h01 = s**2 * (3.0 - 2.0 * s)
        h11 = s**2 * (s - 1.0)
        x = (h00 * self.positions[k] + h10 * h * self.d_positions[k]
             + h01 * self.positions[k + 1] + h11 * h * self.d_positions[k + 1])
        p = (h00 * self.momenta[k] + h10 * h * self.d_momenta[k]
             + h01 * self.momenta[k + 1] + h11 * h * self.d_momenta[k + 1])
        return np.concatenate([x, p])


def _allocate(z0: np.ndarray, n_steps: int):
    x0, p0 = split_phase(z0)
    xs = np.empty((n_steps + 1, x0.size))
    ps = np.empty_like(xs)
    dxs = np.empty_like(xs)
    dps = np.empty_like(xs)
    xs[0], ps[0] = x0, p0
    return xs, ps, dxs, dps


def classical_flow(
    potential: Potential,
    config: SystemConfig,
    z0,
    t_start: float,
    t_end: float,
    n_steps: int,
) -> PhaseTrajectory:
    """Stormer-Verlet (kick-drift-kick) integration of H = p^2/2m + V."""
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if not t_end > t_start:
        raise ValueError("t_end must exceed t_start")
    z0 = np.asarray(z0, dtype=float)
    xs, ps, dxs, dps = _allocate(z0, n_steps)
    m = config.mass_array
    if xs.shape[1] != m.size:
        raise ValueError(f"phase point has {xs.shape[1]} dof, config has {m.size}")
    dt = (t_end - t_start) / n_steps

    x, p = xs[0].copy(), ps[0].copy()
    grad = np.asarray(potential.gradient(x))
    dxs[0], dps[0] = p / m, -grad
    for k in range(n_steps):
        p_half = p - 0.5 * dt * grad
        x = x + dt * p_half / m
        grad = np.asarray(potential.gradient(x))
        p = p_half - 0.5 * dt * grad
        xs[k + 1], ps[k + 1] = x, p
        dxs[k + 1], dps[k + 1] = p / m, -grad
    return PhaseTrajectory(
        times=np.linspace(t_start, t_end, n_steps + 1),
        positions=xs, momenta=ps, d_positions=dxs, d_momenta=dps,
    )


@dataclass
class GaussianQuantumTerm:
    """Quantum potential of a (product) Gaussian packet as a force term.

    One packet per degree of freedom; the total Q is the separable sum. In
    ``frozen`` mode the packets are pinned at their reference time, so Q is
    time-independent (the fluid snapshot picture). In ``thawed`` mode each
    packet's closed-form evolution under ``potential`` supplies the true
    time-dependent Q (quadratic potentials only).
    """

    packets: tuple[GaussianWavepacket, ...]
    config: SystemConfig
    mode: str = "frozen"
    potential: Potential | None = None
    t_ref: float = 0.0
    _dof_configs: tuple[SystemConfig, ...] = dataclass_field(
        init=False, repr=False, compare=False, default=()
    )

    def __post_init__(self) -> None:
        if self.mode not in ("frozen", "thawed"):
            raise ValueError(f"mode must be 'frozen' or 'thawed', got {self.mode!r}")
        if len(self.packets) != self.config.dof:
            raise ValueError(
                f"need one packet per dof: {len(self.packets)} packets, "
                f"dof={self.config.dof}"
            )
        if self.mode == "thawed" and self.potential is None:
            raise ValueError("thawed mode needs the potential for packet evolution")
        # per-dof single-mass views so packet formulas see the right mass
        self._dof_configs = tuple(
            SystemConfig(hbar=self.config.hbar, masses=(mj,))
            for mj in self.config.masses
        )

    def _packets_at(self, t: float):
        if self.mode == "frozen":
            return self.packets
        return tuple(
            g.evolve(self.potential, t - self.t_ref, cfg)
            for g, cfg in zip(self.packets, self._dof_configs)
        )

    def value(self, x, t: float) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return float(
            sum(
                g.quantum_potential_at(float(xj), cfg)
                for g, cfg, xj in zip(self._packets_at(t), self._dof_configs, x)
            )
        )

    def gradient(self, x, t: float) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.array(
            [
                g.quantum_potential_gradient_at(float(xj), cfg)
                for g, cfg, xj in zip(self._packets_at(t), self._dof_configs, x)
            ]
        )


def quantum_flow(
    potential: Potential,
    quantum_term,
    config: SystemConfig,
    z0,
    t_start: float,
    t_end: float,
    n_steps: int,
) -> PhaseTrajectory:
    """RK4 integration of the quantum-corrected Hamiltonian field.

    xdot = p/m, pdot = -grad V(x) - grad Q(x, t); ``quantum_term`` may be None
    (plain classical field, useful for cross-checks) or any object with a
    ``gradient(x, t)`` method such as GaussianQuantumTerm.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if not t_end > t_start:
        raise ValueError("t_end must exceed t_start")
    z0 = np.asarray(z0, dtype=float)
    m = config.mass_array

    def rhs(z: np.ndarray, t: float) -> np.ndarray:
        x, p = split_phase(z)
        force = -np.asarray(potential.gradient(x))
        if quantum_term is not None:
            force = force - quantum_term.gradient(x, t)
        return np.concatenate([p / m, force])

    xs, ps, dxs, dps = _allocate(z0, n_steps)
    if xs.shape[1] != m.size:
        raise ValueError(f"phase point has {xs.shape[1]} dof, config has {m.size}")
    dt = (t_end - t_start) / n_steps
    z = z0.astype(float)
    d0 = rhs(z, t_start)
    dxs[0], dps[0] = split_phase(d0)
    t = t_start
    for k in range(n_steps):
        k1 = rhs(z, t)
        k2 = rhs(z + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = rhs(z + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = rhs(z + dt * k3, t + dt)
        z = z + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
        xs[k + 1], ps[k + 1] = split_phase(z)
        dk = rhs(z, t)
        dxs[k + 1], dps[k + 1] = split_phase(dk)
    return PhaseTrajectory(
        times=np.linspace(t_start, t_end, n_steps + 1),
        positions=xs, momenta=ps, d_positions=dxs, d_momenta=dps,
    )


@dataclass
class AlgorithmFamily:
    """A one-step map k(z, t, dt) plus the vector field it integrates."""

    name: str
    step: Callable[[np.ndarray, float, float], np.ndarray]
    vector_field: Callable[[np.ndarray, float], np.ndarray]


def _hamiltonian_field(potential: Potential, config: SystemConfig, quantum_term=None):
    m = config.mass_array

    def field(z: np.ndarray, t: float) -> np.ndarray:
        x, p = split_phase(z)
        force = -np.asarray(potential.gradient(x))
        if quantum_term is not None:
            force = force - quantum_term.gradient(x, t)
        return np.concatenate([p / m, force])

    return field


def euler_algorithm(potential: Potential, config: SystemConfig) -> AlgorithmFamily:
    """Explicit Euler: x' = x + dt p/m, p' = p - dt grad V(x), both from the
    pre-step values."""
    m = config.mass_array

    def step(z: np.ndarray, t: float, dt: float) -> np.ndarray:
        x, p = split_phase(np.asarray(z, dtype=float))
        return np.concatenate(
            [x + dt * p / m, p - dt * np.asarray(potential.gradient(x))]
        )

    return AlgorithmFamily(
        name="euler", step=step, vector_field=_hamiltonian_field(potential, config)
    )


def verlet_algorithm(potential: Potential, config: SystemConfig) -> AlgorithmFamily:
    """One kick-drift-kick step as an algorithm family."""
    m = config.mass_array

    def step(z: np.ndarray, t: float, dt: float) -> np.ndarray:
        x, p = split_phase(np.asarray(z, dtype=float))
        p_half = p - 0.5 * dt * np.asarray(potential.gradient(x))
        x1 = x + dt * p_half / m
        p1 = p_half - 0.5 * dt * np.asarray(potential.gradient(x1))
        return np.concatenate([x1, p1])

    return AlgorithmFamily(
        name="verlet", step=step, vector_field=_hamiltonian_field(potential, config)
    )


def algorithm_derivative_defect(
    family: AlgorithmFamily, z, t: float = 0.0, *, eps: float = 1e-3
) -> float:
    """sup-norm gap between d/d(dt) k(z, t, dt)|_{dt=0} and the vector field.

    Central differencing through dt = 0 composes a forward and a backward
    step, so the defect is O(eps^2) for any family that is actually tangent
    to its field.
    """
    z = np.asarray(z, dtype=float)
    forward = family.step(z, t, eps)
    backward = family.step(z, t, -eps)
    derivative = (forward - backward) / (2.0 * eps)
    return float(np.max(np.abs(derivative - family.vector_field(z, t))))


def trotter_compose(
    family: AlgorithmFamily,
    z0,
    window: TimeWindow,
    *,
    gate_tol: float = 1e-5,
    gate_eps: float = 1e-3,
) -> np.ndarray:
    """Compose window.n_slices steps of the family across the window.

    The derivative gate runs first: a family whose step map is not tangent to
    its vector field converges to the wrong flow (or none), so composition is
    refused with AlgorithmConsistencyError rather than silently producing
    plausible-looking numbers.

    Returns the (n_slices + 1, 2 dof) array of phase points at slice edges.
    """
    z0 = np.asarray(z0, dtype=float)
    defect = algorithm_derivative_defect(family, z0, window.t_start, eps=gate_eps)
    if defect > gate_tol:
        raise AlgorithmConsistencyError(
            f"algorithm {family.name!r} fails the tangency gate: "
            f"derivative defect {defect:.3e} > {gate_tol:.1e}"
        )
    out = np.empty((window.n_slices + 1, z0.size))
    out[0] = z0
    z = z0
    dt = window.dt
    for k in range(window.n_slices):
        z = family.step(z, float(window.edges[k]), dt)
        out[k + 1] = z
    return out


def symplectic_defect(map_fn, z, *, fd_step: float = 1e-6) -> float:
    """sup-norm of J^T Omega J - Omega for the map's FD Jacobian at z."""
    z = np.asarray(z, dtype=float)
    n = z.size
    jac = np.empty((n, n))
    for j in range(n):
        dz = np.zeros(n)
        dz[j] = fd_step
        jac[:, j] = (np.asarray(map_fn(z + dz)) - np.asarray(map_fn(z - dz))) / (
            2.0 * fd_step
        )
    half = n // 2
    omega = np.zeros((n, n))
    omega[:half, half:] = np.eye(half)
    omega[half:, :half] = -np.eye(half)
    return float(np.max(np.abs(jac.T @ omega @ jac - omega)))


def suspend(field):
    """Autonomize a time-dependent field by adjoining s' = 1.

    Maps f(z, t) to F(Z) on the extended space Z = (z, s) with
    F(Z) = (f(z, s), 1); integrating F and projecting recovers the
    non-autonomous flow exactly.
    """

    def extended(Z: np.ndarray) -> np.ndarray:
        z, s = Z[:-1], Z[-1]
        return np.concatenate([field(z, float(s)), [1.0]])

    return extended
