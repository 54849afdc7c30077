"""Polar decomposition and Bohmian trajectories on grid wavefunctions.

Writing psi = sqrt(rho) exp(i S / hbar) turns the Schrodinger equation into a
continuity equation for rho and a Hamilton-Jacobi equation for S with the
extra quantum potential

    Q = - hbar^2 / (2 m) * (sqrt(rho))'' / sqrt(rho)
      = - hbar^2 / (4 m) * [ rho''/rho - (rho')^2 / (2 rho^2) ]    (same thing)

Trajectories follow the velocity field v = (1/m) dS/dx. Everything here is
defensive about nodes: points where the density falls below a relative floor
are flagged, excluded from derivatives, and terminate trajectories cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .core import ComplexField, SystemConfig
from .numerics import EDGE_POINTS, finite_difference, unwrap_phase

__all__ = [
    "DENSITY_FLOOR",
    "TrajectoryError",
    "PolarFields",
    "BohmTrajectory",
    "polar_decompose",
    "quantum_potential",
    "velocity_field",
    "continuity_residual",
    "integrate_bohm_trajectory",
    "jacobian_density_products",
]

#: default relative density floor below which a grid point counts as nodal
DENSITY_FLOOR = 1e-12


class TrajectoryError(RuntimeError):
    """A Bohmian trajectory hit a node or left the resolved region."""


@dataclass
class PolarFields:
    """rho, S and the nodal flag array of one wavefunction snapshot."""

    density: np.ndarray
    action: np.ndarray
    flagged: np.ndarray

    @property
    def amplitude(self) -> np.ndarray:
        return np.sqrt(self.density)


def polar_decompose(
    field: ComplexField, config: SystemConfig, *, floor: float = DENSITY_FLOOR
) -> PolarFields:
    """Split psi into density and action S = hbar * arg(psi).

    The phase is unwrapped outward from the density maximum so that noisy
    near-node samples cannot corrupt the bulk phase; flagged (sub-floor)
    points keep their raw phase value but should not be trusted.
    """
    rho = field.density()
    peak = float(np.max(rho))
    if peak == 0.0:
        raise ValueError("cannot polar-decompose an identically zero field")
    flagged = rho < floor * peak
    anchor = int(np.argmax(rho))
    action = config.hbar * unwrap_phase(np.angle(field.values), anchor=anchor)
    return PolarFields(density=rho, action=action, flagged=flagged)


def quantum_potential(
    field: ComplexField,
    config: SystemConfig,
    *,
    form: str = "sqrt",
    floor: float = DENSITY_FLOOR,
) -> tuple[np.ndarray, np.ndarray]:
    """Quantum potential of a snapshot, from R''/R or from log-density form.

    Returns (values, flagged); values are NaN where flagged. The two forms are
    algebraically identical; computing both and comparing is a useful grid
    diagnostic, which is why the redundant ``form="log"`` exists at all.
    """
    if config.dof != 1:
        raise ValueError("grid quantum potential is one-dimensional")
    polar = polar_decompose(field, config, floor=floor)
    rho = polar.density
    dx = field.grid.dx
    hbar, m = config.hbar, config.mass
    with np.errstate(divide="ignore", invalid="ignore"):
        if form == "sqrt":
            r = polar.amplitude
            q = -(hbar**2) / (2.0 * m) * finite_difference(r, dx, order=2) / r
        elif form == "log":
            d1 = finite_difference(rho, dx, order=1)
            d2 = finite_difference(rho, dx, order=2)
            q = -(hbar**2) / (4.0 * m) * (d2 / rho - d1**2 / (2.0 * rho**2))
        else:
            raise ValueError(f"form must be 'sqrt' or 'log', got {form!r}")
    q = np.where(polar.flagged, np.nan, q)
    return q, polar.flagged


def velocity_field(
    field: ComplexField,
    config: SystemConfig,
    *,
    floor: float = DENSITY_FLOOR,
) -> tuple[np.ndarray, np.ndarray]:
    """Bohmian velocity v = (hbar/m) Im(psi' / psi); NaN where flagged."""
    if config.dof != 1:
        raise ValueError("grid velocity field is one-dimensional")
    rho = field.density()
    peak = float(np.max(rho))
    if peak == 0.0:
        raise ValueError("velocity field of an identically zero field")
    flagged = rho < floor * peak
    dpsi = finite_difference(field.values, field.grid.dx, order=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        v = config.hbar / config.mass * np.imag(np.conj(field.values) * dpsi) / rho
    v = np.where(flagged, np.nan, v)
    return v, flagged


def continuity_residual(
    before: ComplexField,
    after: ComplexField,
    dt: float,
    config: SystemConfig,
    *,
    floor: float = DENSITY_FLOOR,
) -> np.ndarray:
    """Pointwise residual of d(rho)/dt + d(rho v)/dx = 0 between snapshots.

    Time derivative by central difference across the pair, flux divergence by
    averaging the flux of both snapshots (so the residual is second order in
    dt and dx). NaN where either snapshot is flagged.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if before.grid != after.grid:
        raise ValueError("snapshots live on different grids")
    dx = before.grid.dx
    v0, fl0 = velocity_field(before, config, floor=floor)
    v1, fl1 = velocity_field(after, config, floor=floor)
    rho0 = before.density()
    rho1 = after.density()
    flux = 0.5 * (rho0 * np.where(fl0, 0.0, v0) + rho1 * np.where(fl1, 0.0, v1))
    residual = (rho1 - rho0) / dt + finite_difference(flux, dx, order=1)
    return np.where(fl0 | fl1, np.nan, residual)


@dataclass
class BohmTrajectory:
    """One trajectory sampled at the evolution's snapshot times."""

    times: np.ndarray
    positions: np.ndarray
    momenta: np.ndarray
    quantum_potentials: np.ndarray

    @property
    def endpoint(self) -> tuple[float, float]:
        return float(self.positions[-1]), float(self.momenta[-1])


class _SnapshotInterpolants:
    """Velocity/density/Q splines over the resolved core of one snapshot."""

    def __init__(self, field: ComplexField, config: SystemConfig, floor: float):
        rho = field.density()
        peak = float(np.max(rho))
        core = np.flatnonzero(rho > floor * peak)
        lo, hi = int(core[0]), int(core[-1])
        if hi - lo + 1 < 4 * EDGE_POINTS:
            raise TrajectoryError("resolved region too narrow to interpolate")
        x = field.grid.points[lo : hi + 1]
        v, _ = velocity_field(field, config, floor=floor)
        q, _ = quantum_potential(field, config, floor=floor)
        self.x_lo, self.x_hi = float(x[0]), float(x[-1])
        # trim the one-sided stencil points at the core edges
        s = slice(lo + EDGE_POINTS, hi + 1 - EDGE_POINTS)
        xs = field.grid.points[s]
        self.velocity = CubicSpline(xs, v[s])
        self.q_potential = CubicSpline(xs, q[s])
        self.density = CubicSpline(x, rho[lo : hi + 1])
        self.rho_peak = peak

    def check_inside(self, x: float, t: float, floor: float) -> None:
        if not self.x_lo <= x <= self.x_hi:
            raise TrajectoryError(
                f"trajectory left the resolved region at t={t:.4g} (x={x:.4g})"
            )
        if float(self.density(x)) < floor * self.rho_peak:
            raise TrajectoryError(f"trajectory hit a node at t={t:.4g} (x={x:.4g})")


def integrate_bohm_trajectory(
    evolution,
    x_start: float,
    config: SystemConfig,
    *,
    steps_per_interval: int = 4,
    floor: float = 1e-8,
) -> BohmTrajectory:
    """Integrate dx/dt = v(x, t) through a SlicedEvolution's snapshots.

    The velocity field is a cubic spline in x per snapshot and a linear blend
    in t between adjacent snapshots; stepping is RK4 with
    ``steps_per_interval`` substeps per snapshot interval. Momenta (m v) and
    the quantum potential are recorded at the snapshot times. Raises
    TrajectoryError on node proximity or when leaving the resolved region.
    """
    times = np.asarray(evolution.times, dtype=float)
    if len(evolution.fields) != times.size:
        raise ValueError("evolution must carry one field per snapshot time")
    if times.size < 2:
        raise ValueError("need at least two snapshots")
    snaps = [_SnapshotInterpolants(f, config, floor) for f in evolution.fields]

    m = config.mass
    xs = np.empty(times.size)
    ps = np.empty(times.size)
    qs = np.empty(times.size)
    x = float(x_start)
    snaps[0].check_inside(x, times[0], floor)
    xs[0] = x
    ps[0] = m * float(snaps[0].velocity(x))
    qs[0] = float(snaps[0].q_potential(x))

    for k in range(times.size - 1):
        t0, t1 = times[k], times[k + 1]
        span = t1 - t0
        s0, s1 = snaps[k], snaps[k + 1]

        def v(xx: float, tt: float) -> float:
            w = (tt - t0) / span
            return float((1.0 - w) * s0.velocity(xx) + w * s1.velocity(xx))

        h = span / steps_per_interval
        t = t0
        for _ in range(steps_per_interval):
            k1 = v(x, t)
            k2 = v(x + 0.5 * h * k1, t + 0.5 * h)
            k3 = v(x + 0.5 * h * k2, t + 0.5 * h)
            k4 = v(x + h * k3, t + h)
            x = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
            # stay within the narrower of the two bracketing snapshots
            lo = max(s0.x_lo, s1.x_lo)
            hi = min(s0.x_hi, s1.x_hi)
            if not lo <= x <= hi:
                raise TrajectoryError(
                    f"trajectory left the resolved region at t={t:.4g} (x={x:.4g})"
                )
        s1.check_inside(x, t1, floor)
        xs[k + 1] = x
        ps[k + 1] = m * float(s1.velocity(x))
        qs[k + 1] = float(s1.q_potential(x))

    return BohmTrajectory(times=times.copy(), positions=xs, momenta=ps,
                          quantum_potentials=qs)


def jacobian_density_products(
    evolution,
    x_starts,
    config: SystemConfig,
    *,
    steps_per_interval: int = 4,
    floor: float = 1e-8,
) -> np.ndarray:
    """rho_T(x_T) * (dx_T/dx_0) / rho_0(x_0) for an ensemble of trajectories.

    The transported-density law says this is identically 1; deviations measure
    the combined grid/stepping error. The Jacobian dx_T/dx_0 is differenced
    across the ensemble, so starts must be a sorted, reasonably dense array.
    """
    x_starts = np.asarray(x_starts, dtype=float)
    if x_starts.size < 3 or np.any(np.diff(x_starts) <= 0.0):
        raise ValueError("need at least 3 strictly increasing start points")
    finals = np.array(
        [
            integrate_bohm_trajectory(
                evolution, float(x0), config,
                steps_per_interval=steps_per_interval, floor=floor,
            ).positions[-1]
            for x0 in x_starts
        ]
    )
    jac = np.gradient(finals, x_starts)
    rho0 = CubicSpline(evolution.fields[0].grid.points, evolution.fields[0].density())
    rhoT = CubicSpline(evolution.fields[-1].grid.points, evolution.fields[-1].density())
    return rhoT(finals) * jac / rho0(x_starts)
