"""Classical actions for short-time kernels.

Three flavours:

* ``short_time_action`` -- the averaged-potential action

      Sbar(x, x0; dt) = sum_j m_j (x_j - x0_j)^2 / (2 dt) - Vbar(x, x0) * dt,

  i.e. free-flight kinetic term plus the straight-line average of V. This is
  the phase of the short-time kernel and agrees with the true classical action
  to O(dt^3).
* ``exact_action`` -- closed forms for free and harmonic motion.
* ``action_by_shooting`` -- boundary-value solve for general potentials: RK4
  integration of Hamilton's equations plus Newton iteration on the initial
  momentum, action evaluated as the trapezoid integral of the Lagrangian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SystemConfig
from .potentials import AveragedPotential, Free, Harmonic, Potential

__all__ = [
    "CausticError",
    "ShootingError",
    "ShootingResult",
    "short_time_action",
    "exact_action",
    "harmonic_action_partials",
    "action_by_shooting",
]

#: |sin(omega*dt)| below this counts as a caustic of the harmonic kernel.
CAUSTIC_TOL = 1e-12


class CausticError(ValueError):
    """Exact harmonic kernel/action requested at a focal time (sin w*dt = 0)."""


class ShootingError(RuntimeError):
    """The shooting iteration failed to meet its endpoint tolerance."""


def short_time_action(x, x0, dt: float, config: SystemConfig, vbar: AveragedPotential):
    """Averaged-potential action Sbar(x, x0; dt).

    For a single degree of freedom ``x`` and ``x0`` broadcast like ordinary
    numpy operands (so meshgrid columns/rows produce the full (M, M) phase
    matrix). For dof > 1 the last axis of both arguments indexes the dof.
    """
    if dt == 0.0:
        raise ValueError("dt must be nonzero")
    x = np.asarray(x, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if config.dof == 1:
        kinetic = config.mass * (x - x0) ** 2 / (2.0 * dt)
        pot = vbar.value(x, x0)
    else:
        if x.shape[-1] != config.dof or x0.shape[-1] != config.dof:
            raise ValueError(
                f"last axis must have length dof={config.dof}, "
                f"got shapes {x.shape} and {x0.shape}"
            )
        m = config.mass_array
        kinetic = np.sum(m * (x - x0) ** 2, axis=-1) / (2.0 * dt)
        pot = np.sum(vbar.value(x, x0), axis=-1)
    s = kinetic - pot * dt
    if np.ndim(s) == 0:
        return float(s)
    return s


def _check_harmonic(potential: Harmonic, config: SystemConfig) -> tuple[float, float]:
    m = config.mass
    if not np.isclose(potential.mass, m):
        raise ValueError(
            f"harmonic potential mass {potential.mass} differs from the "
            f"kinetic mass {m}"
        )
    return m, potential.omega


def exact_action(potential: Potential, x, x0, dt: float, config: SystemConfig):
    """Exact classical action between endpoints for free or harmonic motion.

    Free:      S = m (x - x0)^2 / (2 dt)
    Harmonic:  S = m w / (2 sin(w dt)) * ((x^2 + x0^2) cos(w dt) - 2 x x0)

    Raises CausticError at harmonic focal times, ValueError for potentials
    without a closed form.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    x = np.asarray(x, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    if isinstance(potential, Free):
        s = config.mass * (x - x0) ** 2 / (2.0 * dt)
    elif isinstance(potential, Harmonic):
        m, omega = _check_harmonic(potential, config)
        sin = np.sin(omega * dt)
        if abs(sin) < CAUSTIC_TOL:
            raise CausticError(
                f"harmonic action undefined at caustic: omega*dt = {omega * dt}"
            )
        cos = np.cos(omega * dt)
        s = m * omega / (2.0 * sin) * ((x**2 + x0**2) * cos - 2.0 * x * x0)
    else:
        raise ValueError(
            f"no closed-form action for potential {potential.name!r}; "
            "use action_by_shooting"
        )
    if np.ndim(s) == 0:
        return float(s)
    return s


def harmonic_action_partials(
    x: float, x0: float, dt: float, mass: float, omega: float
) -> tuple[float, float]:
    """Analytic (dS/dt, dS/dx) of the exact harmonic action.

    Used to verify the Hamilton-Jacobi equation
    dS/dt + (dS/dx)^2 / (2m) + V(x) = 0 without finite differencing.
    """
    s = np.sin(omega * dt)
    if abs(s) < CAUSTIC_TOL:
        raise CausticError(f"caustic at omega*dt = {omega * dt}")
    c = np.cos(omega * dt)
    dS_dx = mass * omega / s * (x * c - x0)
    dS_dt = -0.5 * mass * omega**2 * (x**2 + x0**2 - 2.0 * x * x0 * c) / s**2
    return float(dS_dt), float(dS_dx)


@dataclass
class ShootingResult:
    """Boundary-value trajectory found by shooting.

    action        -- trapezoid integral of the Lagrangian along the path
    p_initial     -- initial momentum that hits the target endpoint
    p_final       -- momentum on arrival
    times         -- integrator grid
    positions     -- path samples, shape (n_steps + 1,) or (n_steps + 1, dof)
    momenta       -- momentum samples, same shape
    iterations    -- Newton iterations used
    residual      -- endpoint miss distance after the last iteration
    """

    action: float
    p_initial: np.ndarray
    p_final: np.ndarray
    times: np.ndarray
    positions: np.ndarray
    momenta: np.ndarray
    iterations: int
    residual: float


def _integrate_hamilton(potential, x0, p0, t0, t1, n_steps, masses):
    """Fixed-step RK4 for xdot = p/m, pdot = -V'(x). Returns (t, x, p) arrays."""
    dt = (t1 - t0) / n_steps
    x = np.array(x0, dtype=float, ndmin=1)
    p = np.array(p0, dtype=float, ndmin=1)
    xs = np.empty((n_steps + 1, x.size))
    ps = np.empty((n_steps + 1, p.size))
    xs[0], ps[0] = x, p

    def rhs(x, p):
        return p / masses, -potential.gradient(x)

    for k in range(n_steps):
        k1x, k1p = rhs(x, p)
        k2x, k2p = rhs(x + 0.5 * dt * k1x, p + 0.5 * dt * k1p)
        k3x, k3p = rhs(x + 0.5 * dt * k2x, p + 0.5 * dt * k2p)
        k4x, k4p = rhs(x + dt * k3x, p + dt * k3p)
        x = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        p = p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        xs[k + 1], ps[k + 1] = x, p
    t = np.linspace(t0, t1, n_steps + 1)
    return t, xs, ps


def action_by_shooting(
    potential: Potential,
    x,
    x0,
    dt: float,
    config: SystemConfig,
    *,
    n_steps: int = 256,
    tol: float = 1e-10,
    max_iter: int = 60,
) -> ShootingResult:
    """Classical action between x0 and x in time dt for a generic potential.

    Newton iteration (finite-difference Jacobian) on the initial momentum
    drives the RK4 endpoint onto the target; the action is then the trapezoid
    integral of L = p^2/2m - V(x) over the integrator grid.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if dt / n_steps < 1e-12:
        raise ValueError("integrator step below 1e-12; reduce n_steps or raise dt")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    masses = config.mass_array if config.dof > 1 else np.full(x0.shape, config.mass)
    if x.shape != x0.shape or x.shape != masses.shape:
        raise ValueError("x, x0 and masses must have matching shapes")

    # free-flight initial guess
    p0 = masses * (x - x0) / dt

    def endpoint_miss(p_try):
        _, xs, _ = _integrate_hamilton(potential, x0, p_try, 0.0, dt, n_steps, masses)
        return xs[-1] - x

    scale = max(1.0, float(np.max(np.abs(x))), float(np.max(np.abs(x0))))
    miss = endpoint_miss(p0)
    iterations = 0
    while np.max(np.abs(miss)) > tol * scale:
        if iterations >= max_iter:
            raise ShootingError(
                f"shooting failed to converge after {max_iter} iterations; "
                f"residual {np.max(np.abs(miss)):.3e}"
            )
        # finite-difference Jacobian d(endpoint)/d(p0)
        n = p0.size
        jac = np.empty((n, n))
        h = 1e-6 * (1.0 + np.abs(p0))
        for j in range(n):
            dp = np.zeros(n)
            dp[j] = h[j]
            jac[:, j] = (endpoint_miss(p0 + dp) - endpoint_miss(p0 - dp)) / (2.0 * h[j])
        try:
            step = np.linalg.solve(jac, miss)
        except np.linalg.LinAlgError as exc:
            raise ShootingError(f"singular shooting Jacobian: {exc}") from exc
        p0 = p0 - step
        miss = endpoint_miss(p0)
        iterations += 1

    t, xs, ps = _integrate_hamilton(potential, x0, p0, 0.0, dt, n_steps, masses)
    lagrangian = np.sum(ps**2 / (2.0 * masses), axis=1) - np.array(
        [potential.total(q) for q in xs]
    )
    action = float(np.trapezoid(lagrangian, x=t))

    squeeze = x.size == 1
    return ShootingResult(
        action=action,
        p_initial=p0[0] if squeeze else p0,
        p_final=ps[-1][0] if squeeze else ps[-1],
        times=t,
        positions=xs[:, 0] if squeeze else xs,
        momenta=ps[:, 0] if squeeze else ps,
        iterations=iterations,
        residual=float(np.max(np.abs(miss))),
    )
