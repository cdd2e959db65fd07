"""
Relative-coordinate Wigner functions
====================================

The localized product state has a single positive lobe in the relative phase
space. The opposite-side superposition adds interference fringes around
r = 0, which show up as negative Wigner weight.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import TwoSlopeNorm

from twobody_sn import KernelTable, assemble_state, make_grid, wigner_relative

grid = make_grid(256, 40.0)
kernel = KernelTable.build(grid, 0.2)

fig, axes = plt.subplots(1, 2, figsize=(9, 3.5), sharey=True)
for ax, kind in zip(axes, ("I", "IV")):
    state = assemble_state(kind, grid, kernel, "stationary").state
    W = wigner_relative(state)
    print(f"{kind}: integral = {W.integral():.12f}, negativity = {W.negativity():.3e}")
    vmax = np.abs(W.W).max()
    ax.imshow(W.W.T, origin="lower", aspect="auto", cmap="RdBu_r",
              extent=[W.x[0], W.x[-1], W.p[0], W.p[-1]], norm=TwoSlopeNorm(0, -vmax, vmax))
    ax.set(xlim=(-12, 12), ylim=(-4, 4), xlabel="r", title=f"configuration {kind}")
axes[0].set_ylabel("relative momentum")
fig.tight_layout()
fig.savefig("wigner_relative.png", dpi=90)
