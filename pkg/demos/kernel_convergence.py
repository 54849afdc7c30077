"""Short-time kernel accuracy for the harmonic oscillator.

The averaged-potential (kerner-sutcliffe) kernel replaces the exact action in
the free-particle kernel by a midpoint-free average of the potential along the
straight line between endpoints.  Against the closed-form Mehler kernel its
relative defect shrinks like dt^2; the Van Vleck kernel is exact for any
quadratic potential so its defect sits at machine noise.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from bohmflow import Harmonic, SystemConfig
from bohmflow.numerics import fit_convergence_order
from bohmflow.propagators import kernel_values

cfg = SystemConfig(hbar=1.0, masses=(1.0,))
potential = Harmonic(mass=1.0, omega=1.0)
x, x0 = 1.0, 0.0
dts = np.array([0.4, 0.2, 0.1, 0.05, 0.025, 0.0125])

defects = {}
for kind in ("kerner-sutcliffe", "vanvleck"):
    rows = []
    for dt in dts:
        exact = kernel_values("mehler", potential, x, x0, float(dt), cfg)
        approx = kernel_values(kind, potential, x, x0, float(dt), cfg)
        rows.append(abs(approx - exact) / abs(exact))
    defects[kind] = np.array(rows)

order = fit_convergence_order(dts, defects["kerner-sutcliffe"])
print(f"kerner-sutcliffe relative defect order: {order:.3f}")
print(f"vanvleck worst relative defect: {defects['vanvleck'].max():.2e}")
# The quadratic law comes with a clean constant: (omega*dt)^2 / 12.
print("defect / (omega*dt)^2:",
      np.array2string(defects["kerner-sutcliffe"] / dts**2, precision=4))

fig, ax = plt.subplots(figsize=(5.5, 4))
ax.loglog(dts, defects["kerner-sutcliffe"], "o-", label="kerner-sutcliffe")
ax.loglog(dts, defects["vanvleck"], "s-", label="van vleck")
ax.loglog(dts, dts**2 / 12, "k--", lw=1, label=r"$(\omega\,\Delta t)^2/12$")
ax.set_xlabel(r"$\Delta t$")
ax.set_ylabel("relative kernel defect")
ax.legend()
ax.set_title("Short-time kernels vs Mehler, harmonic oscillator")
fig.tight_layout()
fig.savefig("kernel_convergence.png", dpi=150)
print("wrote kernel_convergence.png")
