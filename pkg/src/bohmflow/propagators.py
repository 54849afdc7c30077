"""Short-time kernels, time-sliced evolution, and a Crank-Nicolson reference.

Kernel kinds
------------
``exact-free``        exact free-particle propagator
``mehler``            exact harmonic propagator with Maslov branch tracking
``vanvleck``          sqrt(-d2S/dx dx0 / 2 pi i hbar) exp(i S / hbar) with the
                      exact action (quadratic potentials, principal branch)
``kerner-sutcliffe``  averaged-potential kernel
                      (m / 2 pi i hbar dt)^(1/2) exp(i Sbar / hbar),
                      defined for every potential variant

Applying a kernel on a grid is a trapezoid-weighted dense matrix-vector
product. Because the kinetic phase m (x - x0)^2 / (2 hbar dt) oscillates
faster the shorter the step, each application is guarded by a resolution
check; see ``resolution_report`` for the two-tier rule and ``ResolutionError``
for the failure mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .action import exact_action, short_time_action
from .core import ComplexField, SystemConfig, TimeWindow
from .numerics import finite_difference, unwrap_phase
from .potentials import AveragedPotential, Free, Harmonic, Potential

__all__ = [
    "KERNEL_KINDS",
    "ResolutionError",
    "ResolutionReport",
    "SlicedEvolution",
    "kernel_values",
    "kernel_matrix",
    "resolution_report",
    "apply_kernel",
    "time_slice_evolve",
    "reference_evolve",
]

KERNEL_KINDS = ("exact-free", "mehler", "vanvleck", "kerner-sutcliffe")

#: relative amplitude below which a grid point does not count as support
SUPPORT_CUT = 1e-12
#: stricter cut used when estimating the packet's own phase gradient (phase
#: is numerically meaningless where the amplitude has underflowed)
PHASE_CUT = 1e-6
#: safety margin between the admitted phase increment and the first alias ring
ALIAS_MARGIN = 7.0 / 8.0


class ResolutionError(ValueError):
    """The grid cannot resolve the kernel oscillations for this step size."""


def _require_1d(config: SystemConfig) -> None:
    if config.dof != 1:
        raise ValueError("grid kernels are one-dimensional; got dof="
                         f"{config.dof}")


def _free_prefactor(mass: float, hbar: float, dt: float) -> complex:
    # sqrt(m / (2 pi i hbar dt)) on the principal branch
    return complex(np.sqrt(mass / (2j * math.pi * hbar * dt)))


def kernel_values(
    kind: str,
    potential: Potential,
    x,
    x0,
    dt: float,
    config: SystemConfig,
    *,
    n_average_nodes: int = 16,
):
    """Evaluate a short-time kernel K(x, x0; dt), broadcasting over x and x0."""
    _require_1d(config)
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if kind not in KERNEL_KINDS:
        raise ValueError(f"unknown kernel kind {kind!r}; choose from {KERNEL_KINDS}")
    m, hbar = config.mass, config.hbar
    x = np.asarray(x, dtype=float)
    x0 = np.asarray(x0, dtype=float)

    if kind == "exact-free":
        if not isinstance(potential, Free):
            raise ValueError("exact-free kernel requires the free potential")
        s = exact_action(Free(), x, x0, dt, config)
        out = _free_prefactor(m, hbar, dt) * np.exp(1j * np.asarray(s) / hbar)
    elif kind == "mehler":
        if not isinstance(potential, Harmonic):
            raise ValueError("mehler kernel requires a harmonic potential")
        omega = potential.omega
        s = exact_action(potential, x, x0, dt, config)  # raises at caustics
        sin = math.sin(omega * dt)
        amp = math.sqrt(m * omega / (2.0 * math.pi * hbar * abs(sin)))
        # Maslov index: one extra factor exp(-i pi/2) per focal point crossed
        k = math.floor(omega * dt / math.pi)
        branch = np.exp(-1j * (math.pi / 4.0 + k * math.pi / 2.0))
        out = amp * branch * np.exp(1j * np.asarray(s) / hbar)
    elif kind == "vanvleck":
        # sqrt(rho / 2 pi i hbar) e^{i S/hbar}, rho = -d^2 S / dx dx0
        if isinstance(potential, Free):
            rho = m / dt
            s = exact_action(Free(), x, x0, dt, config)
        elif isinstance(potential, Harmonic):
            omega = potential.omega
            s = exact_action(potential, x, x0, dt, config)
            rho = m * omega / math.sin(omega * dt)
        else:
            raise ValueError(
                "vanvleck kernel needs a closed-form action (free or harmonic)"
            )
        pref = complex(np.sqrt(rho / (2j * math.pi * hbar)))
        out = pref * np.exp(1j * np.asarray(s) / hbar)
    else:  # kerner-sutcliffe
        vbar = AveragedPotential(potential, n_nodes=n_average_nodes)
        s = short_time_action(x, x0, dt, config, vbar)
        out = _free_prefactor(m, hbar, dt) * np.exp(1j * np.asarray(s) / hbar)
    if np.ndim(out) == 0:
        return complex(out)
    return out


def kernel_matrix(
    kind: str,
    potential: Potential,
    grid,
    dt: float,
    config: SystemConfig,
) -> np.ndarray:
    """Dense kernel matrix K[i, j] = K(x_i, x_j; dt) on the grid points."""
    x = grid.points
    return np.asarray(
        kernel_values(kind, potential, x[:, None], x[None, :], dt, config)
    )


@dataclass(frozen=True)
class ResolutionReport:
    """Outcome of the oscillation-resolution check for one kernel application.

    The kinetic chirp rate at source distance d is m d / (hbar dt); adding the
    potential and packet phase rates gives the worst-case phase increment per
    grid cell. Two admissible tiers:

    * ``resolved``    increment <= pi: every oscillation is sampled.
    * ``alias-safe``  increment <= 2 pi * margin: outer contributions are
      undersampled but self-cancelling; the first spurious alias ring would
      appear at increment 2 pi, which the margin keeps out of reach.

    Anything faster is ``under-resolved`` and rejected, because the trapezoid
    sum would fold tail oscillations back onto the packet.
    """

    increment: float
    tier: str
    min_dt: float

    @property
    def ok(self) -> bool:
        return self.tier in ("resolved", "alias-safe")


def resolution_report(
    field: ComplexField,
    potential: Potential,
    dt: float,
    config: SystemConfig,
) -> ResolutionReport:
    """Classify how well the grid resolves one kernel application to field."""
    _require_1d(config)
    m, hbar = config.mass, config.hbar
    grid = field.grid
    x = grid.points
    amp = np.abs(field.values)
    peak = float(np.max(amp))
    if peak == 0.0:
        return ResolutionReport(increment=0.0, tier="resolved", min_dt=0.0)

    support = np.flatnonzero(amp > SUPPORT_CUT * peak)
    s_lo, s_hi = x[support[0]], x[support[-1]]
    distance = max(grid.x_max - s_lo, s_hi - grid.x_min)
    kinetic_rate = m * distance / (hbar * dt)

    grad = np.abs(np.asarray(potential.gradient(x)))
    potential_rate = float(np.max(grad)) * dt / hbar

    core = np.flatnonzero(amp > PHASE_CUT * peak)
    lo, hi = core[0], core[-1]
    packet_rate = 0.0
    if hi - lo + 1 >= 4:
        seg = field.values[lo : hi + 1]
        anchor = int(np.argmax(amp[lo : hi + 1]))
        phase = unwrap_phase(np.angle(seg), anchor=anchor)
        packet_rate = float(np.max(np.abs(finite_difference(phase, grid.dx))))

    rate = kinetic_rate + potential_rate + packet_rate
    increment = rate * grid.dx
    if increment <= math.pi:
        tier = "resolved"
    elif increment <= 2.0 * math.pi * ALIAS_MARGIN:
        tier = "alias-safe"
    else:
        tier = "under-resolved"
    # smallest dt for which the kinetic term alone stays alias-safe
    min_dt = m * distance * grid.dx / (hbar * 2.0 * math.pi * ALIAS_MARGIN)
    return ResolutionReport(increment=float(increment), tier=tier, min_dt=float(min_dt))


def _trapezoid_weights(grid) -> np.ndarray:
    w = np.full(grid.n, grid.dx)
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def apply_kernel(
    kind: str,
    potential: Potential,
    field: ComplexField,
    dt: float,
    config: SystemConfig,
    *,
    check_resolution: bool = True,
) -> ComplexField:
    """One kernel application: psi(x) <- integral K(x, x0) psi(x0) dx0."""
    if check_resolution:
        report = resolution_report(field, potential, dt, config)
        if not report.ok:
            raise ResolutionError(
                f"kernel under-resolved: phase increment {report.increment:.2f} rad "
                f"per cell exceeds {2.0 * math.pi * ALIAS_MARGIN:.2f}; "
                f"use dt >= {report.min_dt:.3e}, a finer grid, or a smaller domain"
            )
    K = kernel_matrix(kind, potential, field.grid, dt, config)
    out = K @ (field.values * _trapezoid_weights(field.grid))
    return ComplexField(field.grid, out)


@dataclass
class SlicedEvolution:
    """Snapshots of a time-sliced evolution at the slice edges."""

    times: np.ndarray
    fields: list
    norms: np.ndarray

    @property
    def final(self) -> ComplexField:
        return self.fields[-1]

    @property
    def norm_drift(self) -> float:
        """Largest deviation of the norm from its initial value."""
        return float(np.max(np.abs(self.norms - self.norms[0])))


def time_slice_evolve(
    kind: str,
    potential: Potential,
    field: ComplexField,
    window: TimeWindow,
    config: SystemConfig,
    *,
    check_resolution: bool = True,
) -> SlicedEvolution:
    """Compose N short-time kernel applications across the window.

    The kernel matrix is built once (every slice has the same dt); the
    resolution check runs against each intermediate field, since support can
    spread toward the domain walls as the packet evolves.
    """
    dt = window.dt
    K = kernel_matrix(kind, potential, field.grid, dt, config)
    Kw = K * _trapezoid_weights(field.grid)[None, :]

    fields = [field.copy()]
    norms = [field.norm()]
    current = field
    for j in range(window.n_slices):
        if check_resolution:
            report = resolution_report(current, potential, dt, config)
            if not report.ok:
                raise ResolutionError(
                    f"slice {j}: phase increment {report.increment:.2f} rad per "
                    f"cell; use dt >= {report.min_dt:.3e} or refine the grid"
                )
        current = ComplexField(field.grid, Kw @ current.values)
        fields.append(current)
        norms.append(current.norm())
    return SlicedEvolution(
        times=np.asarray(window.edges), fields=fields, norms=np.asarray(norms)
    )


def reference_evolve(
    potential: Potential,
    field: ComplexField,
    window: TimeWindow,
    config: SystemConfig,
    *,
    steps_per_slice: int = 64,
) -> SlicedEvolution:
    """Crank-Nicolson reference propagation on the same grid.

    Unconditionally stable, second order in time, and exactly unitary in the
    discrete l2 inner product (the Cayley form of a Hermitian tridiagonal H),
    with hard-wall boundaries at the grid edges. Snapshots are stored at the
    window's slice edges; each slice is integrated with ``steps_per_slice``
    sub-steps.
    """
    _require_1d(config)
    if steps_per_slice < 1:
        raise ValueError("steps_per_slice must be >= 1")
    grid = field.grid
    m, hbar = config.mass, config.hbar
    dx = grid.dx
    dt_sub = window.dt / steps_per_slice

    kin = hbar**2 / (2.0 * m * dx**2)
    diag = 2.0 * kin + np.asarray(potential.value(grid.points), dtype=float)
    off = -kin
    lam = dt_sub / (2.0 * hbar)

    # banded form of (I + i lam H) for solve_banded
    n = grid.n
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = 1j * lam * off
    ab[1, :] = 1.0 + 1j * lam * diag
    ab[2, :-1] = 1j * lam * off

    def rhs(psi: np.ndarray) -> np.ndarray:
        out = (1.0 - 1j * lam * diag) * psi
        out[:-1] -= 1j * lam * off * psi[1:]
        out[1:] -= 1j * lam * off * psi[:-1]
        return out

    fields = [field.copy()]
    norms = [field.norm()]
    psi = field.values.copy()
    for _ in range(window.n_slices):
        for _ in range(steps_per_slice):
            psi = solve_banded((1, 1), ab, rhs(psi))
        snapshot = ComplexField(grid, psi.copy())
        fields.append(snapshot)
        norms.append(snapshot.norm())
    return SlicedEvolution(
        times=np.asarray(window.edges), fields=fields, norms=np.asarray(norms)
    )
