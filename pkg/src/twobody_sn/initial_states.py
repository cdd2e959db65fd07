"""Single-particle profiles and the four two-body initial configurations."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import NoBoundState, NonConvergence
from .grid import Grid1D
from .potentials import KernelTable, self_potential
from .state import SingleProfile, TwoBodyState

log = logging.getLogger(__name__)

KINDS = ("I", "II", "III", "IV")
PROFILE_KINDS = ("gaussian", "stationary")


def _normalize(phi: np.ndarray, dx: float) -> np.ndarray:
    return phi / np.sqrt(np.sum(np.abs(phi) ** 2) * dx)


def gaussian_profile(grid: Grid1D, sigma0: float, center: float = 0.0, mu: float = 1.0) -> SingleProfile:
    """Normalized Gaussian whose density has variance sigma0**2."""
    if not sigma0 > 0:
        raise ValueError(f"sigma0 must be positive, got {sigma0!r}")
    if sigma0 < 2 * grid.dx:
        raise ValueError(f"sigma0={sigma0} is unresolved on a grid with dx={grid.dx}")
    if not -grid.L / 2 <= center < grid.L / 2:
        raise ValueError(f"center {center} outside the domain")
    phi = np.exp(-((grid.x - center) ** 2) / (4.0 * sigma0**2)).astype(complex)
    return SingleProfile(_normalize(phi, grid.dx), grid, "gaussian", center, mu, sigma0)


def translate(phi: np.ndarray, grid: Grid1D, shift: float) -> np.ndarray:
    """Rigid periodic translation phi(x) -> phi(x - shift) by a spectral phase."""
    return np.fft.ifft(np.fft.fft(phi) * np.exp(-1j * grid.k * shift))


def sn_hamiltonian_apply(phi, grid, mu, kappa, kernel):
    """H[phi] phi for the single-particle nonlinear operator; returns (H phi, V)."""
    V = -kappa * mu * self_potential(np.abs(phi) ** 2, kernel, mu)
    kin = np.fft.ifft(grid.k**2 / (2.0 * mu) * np.fft.fft(phi))
    return kin + V * phi, V


def sn_residual(phi, grid, mu, kappa, kernel) -> tuple[float, float]:
    """Return (||H phi - omega phi||_2, omega) with omega the Rayleigh quotient."""
    hphi, _ = sn_hamiltonian_apply(phi, grid, mu, kappa, kernel)
    dx = grid.dx
    omega = float(np.vdot(phi, hphi).real * dx / (np.vdot(phi, phi).real * dx))
    res = float(np.sqrt(np.sum(np.abs(hphi - omega * phi) ** 2) * dx))
    return res, omega


def _fix_phase(phi: np.ndarray) -> np.ndarray:
    j = np.argmax(np.abs(phi))
    return phi * np.exp(-1j * np.angle(phi[j]))


@dataclass
class GroundStateResult:
    profile: SingleProfile
    omega: float
    residual: float
    iterations: int


def ground_state_sn(
    grid: Grid1D,
    mu: float,
    kappa: float,
    kernel: KernelTable,
    seed_sigma: float = 1.0,
    dtau: float = 0.01,
    tol: float = 1e-8,
    max_iter: int = 100_000,
    seed: np.ndarray | None = None,
) -> GroundStateResult:
    """Self-bound ground state of the single-particle SN eigenproblem.

    Imaginary-time Strang steps (half potential, kinetic, half potential, with
    the self-potential rebuilt from the current density) bring the seed close
    to the ground state. The Strang fixed point differs from the true
    eigenstate at O(dtau^2), so the last stretch uses a kinetically
    preconditioned gradient flow whose fixed point satisfies H phi = omega phi
    exactly.
    """
    if not dtau > 0:
        raise ValueError("dtau must be positive")
    if kappa * mu**2 <= 0:
        raise NoBoundState("kappa * mu^2 = 0: no self-bound state exists")
    dx = grid.dx
    if seed is None:
        phi = gaussian_profile(grid, seed_sigma, 0.0, mu).amplitude
    else:
        phi = _normalize(np.asarray(seed, dtype=complex), dx)

    kin = np.exp(-dtau * grid.k**2 / (2.0 * mu))
    check_every = 50
    res_prev = np.inf
    widths = []
    it = 0
    # an already converged seed is returned unchanged
    done = sn_residual(phi, grid, mu, kappa, kernel)[0] < tol
    # Strang stage: stop once the residual reaches the splitting floor.
    while not done and it < max_iter:
        for _ in range(check_every):
            V = -kappa * mu * self_potential(np.abs(phi) ** 2, kernel, mu)
            phi = phi * np.exp(-0.5 * dtau * V)
            phi = np.fft.ifft(kin * np.fft.fft(phi))
            V = -kappa * mu * self_potential(np.abs(phi) ** 2, kernel, mu)
            phi = _normalize(phi * np.exp(-0.5 * dtau * V), dx)
        it += check_every
        res, omega = sn_residual(phi, grid, mu, kappa, kernel)
        rho = np.abs(phi) ** 2
        widths.append(np.sum(rho * grid.x**2) * dx - (np.sum(rho * grid.x) * dx) ** 2)
        if len(widths) > 40 and np.all(np.diff(widths[-40:]) > 0) and widths[-1] > (grid.L / 8) ** 2:
            raise NoBoundState("profile keeps spreading under imaginary-time flow")
        if res < tol:
            break
        if res > 0.95 * res_prev:
            break
        res_prev = res

    # Preconditioned gradient flow to the exact discrete eigenstate.
    _, V = sn_hamiltonian_apply(phi, grid, mu, kappa, kernel)
    step = min(0.1, 1.0 / np.max(np.abs(V)))
    precond = 1.0 / (1.0 + step * grid.k**2 / (2.0 * mu))
    res, omega = sn_residual(phi, grid, mu, kappa, kernel)
    stalled = 0
    best = res
    while res >= tol and it < max_iter:
        hphi, _ = sn_hamiltonian_apply(phi, grid, mu, kappa, kernel)
        omega = float(np.vdot(phi, hphi).real * dx)
        phi = phi - step * np.fft.ifft(precond * np.fft.fft(hphi - omega * phi))
        phi = _normalize(phi, dx)
        it += 1
        if it % 20 == 0:
            res, omega = sn_residual(phi, grid, mu, kappa, kernel)
            if res < 0.999 * best:
                best, stalled = res, 0
            else:
                stalled += 20
                if stalled > 2000:
                    break
    res, omega = sn_residual(phi, grid, mu, kappa, kernel)
    if res >= tol:
        raise NonConvergence(f"residual {res:.3e} above tol {tol:.1e} after {it} iterations")
    phi = _fix_phase(phi)
    log.debug("SN ground state: omega=%.12f residual=%.2e iterations=%d", omega, res, it)
    prof = SingleProfile(phi, grid, "stationary", 0.0, mu, seed_sigma)
    return GroundStateResult(prof, omega, res, it)


def overlap(phi_a: np.ndarray, phi_b: np.ndarray, dx: float) -> complex:
    return complex(np.vdot(phi_a, phi_b) * dx)


@dataclass
class InitialState:
    kind: str
    state: TwoBodyState
    overlap1: float
    overlap2: float
    phi_left: tuple[np.ndarray, np.ndarray]  # left mode for particle 1, particle 2
    phi_right: tuple[np.ndarray, np.ndarray]

    def product_factors(self) -> tuple[np.ndarray, np.ndarray]:
        """Normalized one-body factors of a product configuration (I or II)."""
        (l1, l2), (r1, r2) = self.phi_left, self.phi_right
        if self.kind == "I":
            a, b = l1, r2
        elif self.kind == "II":
            a, b = l1 + r1, l2 + r2
        else:
            raise ValueError(f"configuration {self.kind} is not a product state")
        dx = self.state.grid.dx
        return _normalize(a, dx), _normalize(b, dx)


def centered_profile(grid, profile_kind, mu, sigma0, kappa, kernel, cache=None) -> np.ndarray:
    if profile_kind == "gaussian":
        return gaussian_profile(grid, sigma0, 0.0, mu).amplitude
    if profile_kind == "stationary":
        key = (grid.N, grid.L, kernel.epsilon, mu, kappa, sigma0)
        if cache is not None and key in cache:
            return cache[key]
        phi = ground_state_sn(grid, mu, kappa, kernel, seed_sigma=sigma0).profile.amplitude
        if cache is not None:
            cache[key] = phi
        return phi
    raise ValueError(f"unknown profile kind {profile_kind!r}")


_PROFILE_CACHE: dict = {}


def assemble_state(
    kind: str,
    grid: Grid1D,
    kernel: KernelTable,
    profile_kind: str = "gaussian",
    R0: float = 6.0,
    sigma0: float = 1.0,
    masses: tuple[float, float] = (1.0, 1.0),
    kappa: float = 1.0,
) -> InitialState:
    """Build one of the configurations I (localized product), II (delocalized
    product), III (same-side superposition) or IV (opposite-side superposition).

    Modes are placed at -R0/2 (left) and +R0/2 (right); the analytic
    normalizations are superseded by renormalizing on the grid.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if not 0 < R0 < grid.L / 2:
        raise ValueError(f"R0={R0} must lie in (0, L/2) to avoid wrap-around")
    dx = grid.dx
    modes = []
    for mu in masses:
        base = centered_profile(grid, profile_kind, mu, sigma0, kappa, kernel, _PROFILE_CACHE)
        if profile_kind == "gaussian":
            left = gaussian_profile(grid, sigma0, -R0 / 2, mu).amplitude
            right = gaussian_profile(grid, sigma0, R0 / 2, mu).amplitude
        else:
            left = _normalize(translate(base, grid, -R0 / 2), dx)
            right = _normalize(translate(base, grid, R0 / 2), dx)
        modes.append((left, right))
    (l1, r1), (l2, r2) = modes
    s1 = overlap(l1, r1, dx).real
    s2 = overlap(l2, r2, dx).real
    outer = np.multiply.outer
    if kind == "I":
        psi = outer(l1, r2)
    elif kind == "II":
        psi = outer(l1 + r1, l2 + r2)
    elif kind == "III":
        psi = outer(l1, l2) + outer(r1, r2)
    else:
        psi = outer(l1, r2) + outer(r1, l2)
    state = TwoBodyState(psi.astype(complex), grid, tuple(float(m) for m in masses)).normalized()
    return InitialState(kind, state, s1, s2, (l1, l2), (r1, r2))


def bell_eigenvalues(s: float) -> tuple[float, float]:
    """Closed-form Schmidt weights of the two-mode superpositions with overlap s."""
    d = 2.0 * (1.0 + s * s)
    return (1.0 + s) ** 2 / d, (1.0 - s) ** 2 / d
