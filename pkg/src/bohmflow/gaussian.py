"""Closed-form Gaussian wavepacket dynamics.

A complex-width ("thawed") Gaussian

    psi(x) = exp[ (i/hbar) ( alpha/2 (x-q)^2 + p (x-q) + gamma ) ],
    Im(alpha) > 0,

stays Gaussian under free and harmonic evolution, with (q, p) following the
classical orbit and

    alpha_dot = -alpha^2/m - V''(q),
    gamma_dot = p^2/2m - V(q) + i hbar alpha / (2 m).

The closed-form solutions implemented here are the package's primary oracle:
exact for all quadratic potentials, they pin down spreading rates, Bohmian
trajectories, quantum potentials and the action of the short-time kernel
without any grid in sight. The width is sigma^2 = hbar / (2 Im alpha).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import ComplexField, SpatialGrid, SystemConfig
from .potentials import Free, Harmonic, Potential

__all__ = [
    "GaussianWavepacket",
    "coherent_width",
    "analytic_bohm_trajectory",
]


def coherent_width(omega: float, config: SystemConfig) -> float:
    """Width sigma = sqrt(hbar / 2 m omega) of the shape-invariant packet."""
    return math.sqrt(config.hbar / (2.0 * config.mass * omega))


@dataclass(frozen=True)
class GaussianWavepacket:
    """Parameters (q, p, alpha, gamma) of a complex Gaussian, Im(alpha) > 0."""

    center: float
    momentum: float
    alpha: complex
    gamma: complex = 0j

    def __post_init__(self) -> None:
        if not self.alpha.imag > 0.0:
            raise ValueError(
                f"Im(alpha) must be positive for normalizability, got {self.alpha}"
            )

    # -- construction ---------------------------------------------------

    @classmethod
    def from_width(
        cls,
        center: float,
        sigma: float,
        momentum: float = 0.0,
        *,
        config: SystemConfig,
        phase: float = 0.0,
    ) -> "GaussianWavepacket":
        """Unit-norm packet of real width sigma (alpha purely imaginary)."""
        if sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {sigma}")
        hbar = config.hbar
        alpha = 1j * hbar / (2.0 * sigma**2)
        # Im(gamma) fixes the L2 norm to 1; Re(gamma) is the global phase.
        gamma = hbar * phase + 0.25j * hbar * math.log(2.0 * math.pi * sigma**2)
        return cls(center=center, momentum=momentum, alpha=alpha, gamma=gamma)

    # -- static properties ----------------------------------------------

    def sigma(self, config: SystemConfig) -> float:
        return math.sqrt(config.hbar / (2.0 * self.alpha.imag))

    def evaluate(self, x, config: SystemConfig) -> np.ndarray:
        dx = np.asarray(x, dtype=float) - self.center
        expo = 0.5 * self.alpha * dx**2 + self.momentum * dx + self.gamma
        return np.exp(1j * expo / config.hbar)

    def sample(self, grid: SpatialGrid, config: SystemConfig) -> ComplexField:
        return ComplexField(grid, self.evaluate(grid.points, config))

    def norm(self, config: SystemConfig) -> float:
        """Exact L2 norm (no grid)."""
        sig = self.sigma(config)
        return float(
            math.exp(-self.gamma.imag / config.hbar)
            * (2.0 * math.pi * sig**2) ** 0.25
        )

    def phase_momentum(self, x, config: SystemConfig):
        """dS/dx of the packet's phase: Re(alpha) (x - q) + p."""
        dx = np.asarray(x, dtype=float) - self.center
        return self.alpha.real * dx + self.momentum

    def quantum_potential_at(self, x, config: SystemConfig):
        """Q(x) = hbar^2/(4 m sigma^2) * (1 - (x-q)^2 / (2 sigma^2))."""
        sig2 = self.sigma(config) ** 2
        dx = np.asarray(x, dtype=float) - self.center
        q = config.hbar**2 / (4.0 * config.mass * sig2) * (1.0 - dx**2 / (2.0 * sig2))
        return float(q) if np.ndim(q) == 0 else q

    def quantum_potential_gradient_at(self, x, config: SystemConfig):
        """dQ/dx = -hbar^2 (x-q) / (4 m sigma^4): the quantum force is +."""
        sig2 = self.sigma(config) ** 2
        dx = np.asarray(x, dtype=float) - self.center
        g = -config.hbar**2 * dx / (4.0 * config.mass * sig2**2)
        return float(g) if np.ndim(g) == 0 else g

    # -- closed-form evolution -------------------------------------------

    def evolve_free(self, t: float, config: SystemConfig) -> "GaussianWavepacket":
        """Exact free evolution by time t (t may be negative)."""
        m = config.mass
        u = 1.0 + self.alpha * t / m
        alpha = self.alpha / u
        gamma = (
            self.gamma
            + self.momentum**2 * t / (2.0 * m)
            + 0.5j * config.hbar * np.log(u)
        )
        return GaussianWavepacket(
            center=self.center + self.momentum * t / m,
            momentum=self.momentum,
            alpha=complex(alpha),
            gamma=complex(gamma),
        )

    def evolve_harmonic(
        self, t: float, omega: float, config: SystemConfig
    ) -> "GaussianWavepacket":
        """Exact evolution in V = m w^2 x^2 / 2, with branch tracking.

        alpha(t) = m u'/u for u = cos(wt) + (alpha0/m w) sin(wt); the log of u
        in gamma is taken on the continuous branch (u winds forward through
        the upper/lower half planes once per half period), which keeps the
        global phase correct through focal times.
        """
        m = config.mass
        wt = omega * t
        c, s = math.cos(wt), math.sin(wt)
        u = c + self.alpha / (m * omega) * s
        alpha = (self.alpha * c - m * omega * s) / u

        q0, p0 = self.center, self.momentum
        q = q0 * c + p0 / (m * omega) * s
        p = p0 * c - m * omega * q0 * s
        classical_action = 0.5 * (q * p - q0 * p0)

        # continuous log: principal value plus the accumulated winding, one
        # half-turn of u per half period of the oscillator
        k = math.floor(wt / math.pi)
        log_u = np.log(u * (-1.0) ** k) + 1j * k * math.pi
        gamma = self.gamma + classical_action + 0.5j * config.hbar * log_u
        return GaussianWavepacket(
            center=q, momentum=p, alpha=complex(alpha), gamma=complex(gamma)
        )

    def evolve(
        self, potential: Potential, t: float, config: SystemConfig
    ) -> "GaussianWavepacket":
        """Dispatch to the free/harmonic closed forms; no others exist."""
        if isinstance(potential, Free):
            return self.evolve_free(t, config)
        if isinstance(potential, Harmonic):
            if not np.isclose(potential.mass, config.mass):
                raise ValueError(
                    f"harmonic potential mass {potential.mass} differs from "
                    f"the kinetic mass {config.mass}"
                )
            return self.evolve_harmonic(t, potential.omega, config)
        raise ValueError(
            f"no closed-form Gaussian evolution for potential {potential.name!r}"
        )

    # -- one application of the short-time kernel -------------------------

    def apply_short_time_kernel(
        self, potential: Potential, dt: float, config: SystemConfig
    ) -> "GaussianWavepacket":
        """Propagate by one averaged-potential kernel step, in closed form.

        The kernel's phase is quadratic in the integration variable for free
        and harmonic potentials, so the x0 integral is an exact complex
        Gaussian integral and the result is again a Gaussian packet. For the
        free potential the kernel *is* the exact propagator and this method
        reproduces evolve_free identically.
        """
        if dt <= 0.0:
            raise ValueError(f"dt must be positive, got {dt}")
        m, hbar = config.mass, config.hbar
        if isinstance(potential, Free):
            w2 = 0.0
        elif isinstance(potential, Harmonic):
            if not np.isclose(potential.mass, m):
                raise ValueError("harmonic potential mass differs from kinetic mass")
            w2 = m * potential.omega**2
        else:
            raise ValueError(
                "closed-form kernel step needs a quadratic potential, got "
                f"{potential.name!r}"
            )

        a0, q0, p0, g0 = self.alpha, self.center, self.momentum, self.gamma
        # exponent in the source variable y: a2 y^2 + (mu x + nu) y + ...
        a2 = m / (2.0 * dt) - w2 * dt / 6.0 + a0 / 2.0
        if not a2.imag > 0.0:
            raise ValueError("kernel step lost normalizability (Im a2 <= 0)")
        mu = -m / dt - w2 * dt / 6.0
        nu = p0 - a0 * q0

        # Gaussian integral over y plus the kernel prefactor sqrt(m/2 pi i
        # hbar dt) collapse into sqrt(m / (2 dt a2)).
        gamma_extra = -0.5j * hbar * np.log(m / (2.0 * dt * a2))

        c2 = m / (2.0 * dt) - w2 * dt / 6.0 - mu**2 / (4.0 * a2)
        c1 = -mu * nu / (2.0 * a2)
        c0 = 0.5 * a0 * q0**2 - p0 * q0 + g0 - nu**2 / (4.0 * a2) + gamma_extra

        alpha = 2.0 * c2
        if not alpha.imag > 0.0:
            raise ValueError("kernel step produced a non-normalizable packet")
        q = -c1.imag / alpha.imag
        p = c1.real + alpha.real * q
        gamma = c0 + c1 * q + c2 * q**2
        return GaussianWavepacket(
            center=float(q), momentum=float(p), alpha=complex(alpha), gamma=complex(gamma)
        )

    def with_phase(self, extra: float, config: SystemConfig) -> "GaussianWavepacket":
        """Multiply by a global phase exp(i*extra)."""
        return replace(self, gamma=self.gamma + config.hbar * extra)


def analytic_bohm_trajectory(
    packet: GaussianWavepacket,
    potential: Potential,
    x_start: float,
    times,
    config: SystemConfig,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact Bohmian trajectory seeded at x_start inside a Gaussian packet.

    A Gaussian density evolves by an affine map, so each trajectory keeps its
    quantile:

        x(t) = q(t) + (x_start - q0) * sigma(t)/sigma0,
        p(t) = p_packet(t) + (x_start - q0) * sigma(t) Re(alpha(t)) / sigma0,

    (using m*sigma_dot = sigma*Re(alpha)); the quantum potential along the
    path follows from the Gaussian Q formula. Returns (x, p, Q) arrays over
    ``times`` (absolute times; the packet is taken as the state at times[0]).
    """
    times = np.asarray(times, dtype=float)
    sig0 = packet.sigma(config)
    offset = (x_start - packet.center) / sig0

    xs = np.empty_like(times)
    ps = np.empty_like(times)
    qs = np.empty_like(times)
    for i, t in enumerate(times):
        g = packet.evolve(potential, float(t - times[0]), config)
        sig = g.sigma(config)
        xs[i] = g.center + offset * sig
        ps[i] = g.momentum + offset * sig * g.alpha.real
        qs[i] = g.quantum_potential_at(xs[i], config)
    return xs, ps, qs
