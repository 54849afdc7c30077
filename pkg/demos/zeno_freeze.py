"""Repeated measurement drives a wavepacket onto its classical orbit.

Between observations the packet center obeys classical mechanics plus the
quantum force of the freshly prepared Gaussian; each re-preparation resets
that force.  More observations leave less time for the quantum force to act,
and the endpoint error against the classical quarter-turn falls like 1/N.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from bohmflow import Harmonic, SystemConfig
from bohmflow.numerics import fit_convergence_order
from bohmflow.zeno import MeasurementSchedule, zeno_run_flow

cfg = SystemConfig(hbar=1.0, masses=(1.0,))
potential = Harmonic(mass=1.0, omega=1.0)
z0 = [1.0, 0.0]
t_end = math.pi / 2  # quarter period: classical endpoint (0, -1)

counts = [2, 4, 8, 16, 32, 64, 128]
errors = []
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))

for n in counts:
    schedule = MeasurementSchedule(0.0, t_end, n, sigma_meas=0.5)
    result = zeno_run_flow(potential, schedule, z0, cfg)
    errors.append(result.endpoint_error)
    print(f"N = {n:4d}   endpoint ({result.positions[-1, 0]:+.4f}, "
          f"{result.momenta[-1, 0]:+.4f})   classical error {errors[-1]:.3e}")
    if n in (4, 16, 64):
        ax1.plot(result.positions[:, 0], result.momenta[:, 0], "o-",
                 ms=3, lw=1, label=f"N = {n}")

theta = np.linspace(0, t_end, 200)
ax1.plot(np.cos(theta), -np.sin(theta), "k--", lw=1, label="classical")
ax1.set_xlabel("x")
ax1.set_ylabel("p")
ax1.set_title("observed phase-space path")
ax1.legend(fontsize=8)

order = fit_convergence_order(1.0 / np.array(counts), np.array(errors))
ax2.loglog(counts, errors, "o-")
ax2.set_xlabel("observations N")
ax2.set_ylabel("endpoint error")
ax2.set_title(f"classicalization, order {order:.2f} in 1/N")
fig.tight_layout()
fig.savefig("zeno_freeze.png", dpi=150)
print(f"fitted order in 1/N: {order:.3f}")
print("wrote zeno_freeze.png")
