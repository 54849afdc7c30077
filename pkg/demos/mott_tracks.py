"""Straight tracks from repeated position measurement in two dimensions.

A free Gaussian launched with unit momentum in a random direction is observed
64 times.  After every observation the quantum force points along the
displacement from the collapse center, i.e. along the direction of motion, so
the track stays on the launch ray to machine precision -- the cloud-chamber
picture of a spherical wave leaving a straight line.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from bohmflow.zeno import mott_track

fig, ax = plt.subplots(figsize=(5, 5))
for seed in range(12):
    track = mott_track(seed=seed)
    ax.plot(track.positions[:, 0], track.positions[:, 1], ".-", ms=2, lw=0.7)
    print(f"seed {seed:2d}   direction ({track.direction[0]:+.3f}, "
          f"{track.direction[1]:+.3f})   straightness {track.straightness:.2e}")

ax.plot(0, 0, "k*", ms=12)
ax.set_aspect("equal")
ax.set_xlabel("x")
ax.set_ylabel("y")
ax.set_title("watched free packets leave straight tracks")
fig.tight_layout()
fig.savefig("mott_tracks.png", dpi=150)
print("wrote mott_tracks.png")
