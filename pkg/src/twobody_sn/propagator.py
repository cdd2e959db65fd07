"""Second-order split-step evolution of the two-body wavefunction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import NormBlowup
from .potentials import Couplings, KernelTable, pair_potential_grid, self_potential
from .state import TwoBodyState

NORM_LIMIT = 1e-6


@dataclass
class StepPlan:
    dt: float
    masses: tuple[float, float]
    couplings: Couplings
    kernel: KernelTable
    kinetic_phase: np.ndarray
    kinetic_energy: np.ndarray  # k1^2/2mu1 + k2^2/2mu2
    pair_field: np.ndarray
    pair_half_phase: np.ndarray

    @classmethod
    def build(cls, kernel: KernelTable, masses, couplings: Couplings, dt: float) -> "StepPlan":
        if not dt > 0:
            raise ValueError("dt must be positive")
        grid = kernel.grid
        mu1, mu2 = masses
        k2 = grid.k**2
        tk = np.add.outer(k2 / (2 * mu1), k2 / (2 * mu2))
        V = pair_potential_grid(grid, masses, couplings.gamma, kernel)
        return cls(
            dt=float(dt),
            masses=(float(mu1), float(mu2)),
            couplings=couplings,
            kernel=kernel,
            kinetic_phase=np.exp(-1j * dt * tk),
            kinetic_energy=tk,
            pair_field=V,
            pair_half_phase=np.exp(-0.5j * dt * V),
        )

    @property
    def grid(self):
        return self.kernel.grid


def marginals(psi: np.ndarray, dx: float) -> tuple[np.ndarray, np.ndarray]:
    dens = psi.real**2 + psi.imag**2
    return dens.sum(axis=1) * dx, dens.sum(axis=0) * dx


def self_fields(psi: np.ndarray, plan: StepPlan):
    """Self-potentials (Phi1 on x1, Phi2 on x2) from the current marginals."""
    rho1, rho2 = marginals(psi, plan.grid.dx)
    mu1, mu2 = plan.masses
    return self_potential(rho1, plan.kernel, mu1), self_potential(rho2, plan.kernel, mu2)


def _potential_half(psi: np.ndarray, plan: StepPlan) -> np.ndarray:
    kappa = plan.couplings.kappa
    mu1, mu2 = plan.masses
    half = 0.5 * plan.dt
    if kappa:
        phi1, phi2 = self_fields(psi, plan)
        p1 = np.exp(1j * half * kappa * mu1 * phi1)
        p2 = np.exp(1j * half * kappa * mu2 * phi2)
        psi = psi * p1[:, None] * p2[None, :]
    if plan.couplings.gamma:
        psi = psi * plan.pair_half_phase
    return psi


def strang_psi(psi: np.ndarray, plan: StepPlan) -> np.ndarray:
    """Potential half step, full kinetic step, potential half step."""
    psi = _potential_half(psi, plan)
    psi = np.fft.ifft2(plan.kinetic_phase * np.fft.fft2(psi))
    return _potential_half(psi, plan)


def step(state: TwoBodyState, plan: StepPlan) -> TwoBodyState:
    psi = strang_psi(state.psi, plan)
    out = TwoBodyState(psi, state.grid, state.masses, state.t + plan.dt)
    n = out.norm()
    if not abs(n - 1.0) <= NORM_LIMIT:
        raise NormBlowup(f"norm {n!r} at t={out.t:.4f}; reduce dt")
    return out


@dataclass
class EnergyBreakdown:
    E_kin: float
    E_pair: float
    E_self1: float
    E_self2: float
    norm: float

    @property
    def E_total(self) -> float:
        return self.E_kin + self.E_pair + self.E_self1 + self.E_self2


def energy(state: TwoBodyState, plan: StepPlan) -> EnergyBreakdown:
    dx = state.grid.dx
    n = state.grid.N
    psi = state.psi
    dens = psi.real**2 + psi.imag**2
    spec = np.fft.fft2(psi)
    e_kin = float(np.sum((spec.real**2 + spec.imag**2) * plan.kinetic_energy) * dx**2 / n**2)
    e_pair = float(np.sum(dens * plan.pair_field) * dx**2)
    rho1, rho2 = dens.sum(axis=1) * dx, dens.sum(axis=0) * dx
    kappa = plan.couplings.kappa
    mu1, mu2 = plan.masses
    if kappa:
        phi1 = self_potential(rho1, plan.kernel, mu1)
        phi2 = self_potential(rho2, plan.kernel, mu2)
        e1 = -0.5 * kappa * mu1 * float(rho1 @ phi1) * dx
        e2 = -0.5 * kappa * mu2 * float(rho2 @ phi2) * dx
    else:
        e1 = e2 = 0.0
    return EnergyBreakdown(e_kin, e_pair, e1, e2, float(dens.sum() * dx**2))


def evolve(
    state: TwoBodyState,
    plan: StepPlan,
    t_final: float,
    sample_every: int = 10,
    sink: Callable[[TwoBodyState], object] | None = None,
) -> tuple[TwoBodyState, list]:
    """Advance to ``t_final`` and call ``sink`` on the initial and every sampled state.

    Returns the final state and the list of sink return values.
    """
    if not t_final > 0:
        raise ValueError("t_final must be positive")
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    records = []
    for st, sampled in iterate(state, plan, t_final, sample_every):
        if sampled and sink is not None:
            records.append(sink(st))
        state = st
    return state, records


def n_steps(t_final: float, dt: float) -> int:
    return int(round(t_final / dt))


def iterate(state: TwoBodyState, plan: StepPlan, t_final: float, sample_every: int = 1
            ) -> Iterator[tuple[TwoBodyState, bool]]:
    """Yield (state, is_sample) for the initial state and after every step."""
    yield state, True
    psi = state.psi
    t0 = state.t
    nsteps = n_steps(t_final - t0, plan.dt)
    for i in range(1, nsteps + 1):
        psi = strang_psi(psi, plan)
        st = TwoBodyState(psi, state.grid, state.masses, t0 + i * plan.dt)
        sampled = i % sample_every == 0 or i == nsteps
        if sampled:
            n = st.norm()
            if not abs(n - 1.0) <= NORM_LIMIT:
                raise NormBlowup(f"norm {n!r} at t={st.t:.4f}; reduce dt")
        yield st, sampled
