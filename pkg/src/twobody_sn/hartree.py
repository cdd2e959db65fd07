"""Mean-field (Hartree product) reduction of the two-body dynamics.

Each particle carries its own one-body wavefunction and feels its own
self-potential plus the mean field of the partner's density. The product
form is kept exactly, so no entanglement can build up.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .diagnostics import entropies, schmidt
from .errors import NormBlowup
from .potentials import Couplings, KernelTable, convolve, self_potential
from .propagator import NORM_LIMIT, EnergyBreakdown, StepPlan, strang_psi, energy
from .state import TwoBodyState


@dataclass
class HartreePair:
    psi1: np.ndarray
    psi2: np.ndarray
    masses: tuple[float, float] = (1.0, 1.0)
    t: float = 0.0

    def densities(self):
        return np.abs(self.psi1) ** 2, np.abs(self.psi2) ** 2

    def to_state(self, grid) -> TwoBodyState:
        return TwoBodyState.product(self.psi1, self.psi2, grid, self.masses, self.t)


@dataclass
class HartreePlan:
    dt: float
    kernel: KernelTable
    couplings: Couplings
    masses: tuple[float, float]
    kinetic: tuple[np.ndarray, np.ndarray]

    @classmethod
    def build(cls, kernel: KernelTable, masses, couplings: Couplings, dt: float) -> "HartreePlan":
        k2 = kernel.grid.k ** 2
        kin = tuple(np.exp(-1j * dt * k2 / (2 * mu)) for mu in masses)
        return cls(float(dt), kernel, couplings, tuple(float(m) for m in masses), kin)


def mean_field_potentials(rho1, rho2, plan: HartreePlan):
    """Effective one-body potentials V1(x1), V2(x2) for the current densities."""
    kappa, gamma = plan.couplings.kappa, plan.couplings.gamma
    mu1, mu2 = plan.masses
    K = plan.kernel
    v1 = -kappa * mu1 * self_potential(rho1, K, mu1)
    v2 = -kappa * mu2 * self_potential(rho2, K, mu2)
    if gamma:
        v1 = v1 - gamma * mu1 * mu2 * convolve(rho2, K)
        v2 = v2 - gamma * mu1 * mu2 * convolve(rho1, K)
    return v1, v2


def _half_kick(pair: HartreePair, plan: HartreePlan):
    rho1, rho2 = pair.densities()
    v1, v2 = mean_field_potentials(rho1, rho2, plan)
    h = 0.5 * plan.dt
    return pair.psi1 * np.exp(-1j * h * v1), pair.psi2 * np.exp(-1j * h * v2)


def hartree_step(pair: HartreePair, plan: HartreePlan) -> HartreePair:
    """Synchronous Strang step for both factors."""
    a, b = _half_kick(pair, plan)
    a = np.fft.ifft(plan.kinetic[0] * np.fft.fft(a))
    b = np.fft.ifft(plan.kinetic[1] * np.fft.fft(b))
    out = replace(pair, psi1=a, psi2=b)
    a, b = _half_kick(out, plan)
    dx = plan.kernel.grid.dx
    t = pair.t + plan.dt
    norms = [float(np.vdot(psi, psi).real * dx) for psi in (a, b)]
    for n in norms:
        if not abs(n - 1.0) <= NORM_LIMIT:
            raise NormBlowup(f"Hartree factor norm {n!r} at t={t:.4f}")
    # zero gauge constants; renormalizing only strips round-off
    return replace(pair, psi1=a / np.sqrt(norms[0]), psi2=b / np.sqrt(norms[1]), t=t)


def hartree_energy(pair: HartreePair, plan: HartreePlan) -> EnergyBreakdown:
    grid = plan.kernel.grid
    dx = grid.dx
    kappa, gamma = plan.couplings.kappa, plan.couplings.gamma
    mu1, mu2 = plan.masses
    rho1, rho2 = pair.densities()
    e_kin = 0.0
    for psi, mu in ((pair.psi1, mu1), (pair.psi2, mu2)):
        spec = np.fft.fft(psi)
        e_kin += float(np.sum(np.abs(spec) ** 2 * grid.k**2 / (2 * mu))) * dx / grid.N
    e1 = -0.5 * kappa * mu1 * float(rho1 @ self_potential(rho1, plan.kernel, mu1)) * dx
    e2 = -0.5 * kappa * mu2 * float(rho2 @ self_potential(rho2, plan.kernel, mu2)) * dx
    e_pair = -gamma * mu1 * mu2 * float(rho1 @ convolve(rho2, plan.kernel)) * dx
    norm = float(rho1.sum() * dx * rho2.sum() * dx)
    return EnergyBreakdown(e_kin, e_pair, e1, e2, norm)


@dataclass
class ComparisonRow:
    t: float
    S_vN_full: float
    S_vN_hartree: float
    L2_marginal_dist: float
    E_full: float
    E_hartree: float


def compare(phi1: np.ndarray, phi2: np.ndarray, kernel: KernelTable, masses, couplings: Couplings,
            dt: float, t_final: float, sample_every: int = 10) -> list[ComparisonRow]:
    """Run the full two-body model and the Hartree reduction from the same factors."""
    grid = kernel.grid
    dx = grid.dx
    full_plan = StepPlan.build(kernel, masses, couplings, dt)
    hplan = HartreePlan.build(kernel, masses, couplings, dt)
    pair = HartreePair(np.asarray(phi1, complex), np.asarray(phi2, complex), tuple(masses))
    psi = pair.to_state(grid).psi
    rows = []
    nsteps = int(round(t_final / dt))
    for i in range(nsteps + 1):
        if i:
            psi = strang_psi(psi, full_plan)
            pair = hartree_step(pair, hplan)
        if i % sample_every == 0 or i == nsteps:
            st = TwoBodyState(psi, grid, tuple(masses), i * dt)
            dens = np.abs(psi) ** 2
            rho1, rho2 = dens.sum(axis=1) * dx, dens.sum(axis=0) * dx
            h1, h2 = pair.densities()
            dist = float(np.sqrt((np.sum((rho1 - h1) ** 2) + np.sum((rho2 - h2) ** 2)) * dx))
            rows.append(ComparisonRow(
                t=i * dt,
                S_vN_full=entropies(schmidt(st))[0],
                S_vN_hartree=0.0,  # product state by construction
                L2_marginal_dist=dist,
                E_full=energy(st, full_plan).E_total,
                E_hartree=hartree_energy(pair, hplan).E_total,
            ))
    return rows
