"""
Self-bound ground state of a single particle
============================================

A lone particle attracted by its own softened gravitational field settles into
a stationary profile. We find it by imaginary-time relaxation and check it
against the eigenvalue equation.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from twobody_sn import KernelTable, ground_state_sn, make_grid
from twobody_sn.potentials import self_potential

grid = make_grid(256, 40.0)
kernel = KernelTable.build(grid, epsilon=0.2)

###############################################################################
# Solve for a few masses. Heavier particles bind more tightly.

fig, (ax_phi, ax_v) = plt.subplots(1, 2, figsize=(9, 3.5))
for mu in (1.0, 1.5, 2.0):
    gs = ground_state_sn(grid, mu, kappa=1.0, kernel=kernel)
    print(f"mu = {mu}: omega = {gs.omega:.10f}, residual = {gs.residual:.1e}, iterations = {gs.iterations}")
    ax_phi.plot(grid.x, gs.profile.density, label=f"mu = {mu}")
    V = -mu * self_potential(gs.profile.density, kernel, mu)
    ax_v.plot(grid.x, V)
    ax_v.axhline(gs.omega, ls=":", color=ax_v.lines[-1].get_color())

ax_phi.set(xlim=(-5, 5), xlabel="x", ylabel="density")
ax_phi.legend()
ax_v.set(xlim=(-10, 10), xlabel="x", ylabel="self-potential energy (dotted: eigenvalue)")
fig.tight_layout()
fig.savefig("ground_state.png", dpi=90)

###############################################################################
# The profile is real, even and peaked at the origin.

gs = ground_state_sn(grid, 1.0, 1.0, kernel)
phi = gs.profile.amplitude
print("max |Im phi| =", np.abs(phi.imag).max())
print("norm =", gs.profile.norm())
