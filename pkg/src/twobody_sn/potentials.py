"""Softened gravitational kernel, self-potentials and the pair interaction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import Grid1D, periodic_min_distance


def kernel_eval(r, epsilon: float, L: float | None = None):
    """Softened inverse distance 1/sqrt(r^2 + eps^2).

    With ``L`` given, ``r`` is first wrapped to the periodic minimum distance.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    if L is not None:
        r = periodic_min_distance(r, L)
    r = np.asarray(r, dtype=float)
    out = 1.0 / np.sqrt(r * r + epsilon * epsilon)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Couplings:
    kappa: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        for name in ("kappa", "gamma"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and non-negative, got {v!r}")


@dataclass(frozen=True)
class KernelTable:
    """Kernel sampled at every periodic grid offset, plus its DFT."""

    grid: Grid1D
    epsilon: float
    samples: np.ndarray = field(repr=False, compare=False)
    spectrum: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def build(cls, grid: Grid1D, epsilon: float) -> "KernelTable":
        samples = kernel_eval(grid.offsets(), epsilon)
        spectrum = np.fft.fft(samples)
        samples.setflags(write=False)
        spectrum.setflags(write=False)
        return cls(grid=grid, epsilon=float(epsilon), samples=samples, spectrum=spectrum)

    def matrix(self) -> np.ndarray:
        """Dense circulant U(x_i - x_j); O(N^2), used for oracles and the pair field."""
        n = self.grid.N
        idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
        return self.samples[idx]


def convolve(rho: np.ndarray, kernel: KernelTable, axis: int = -1) -> np.ndarray:
    """Circular convolution sum_j U(x - x_j) rho_j dx along ``axis``."""
    shape = [1] * np.ndim(rho)
    shape[axis] = kernel.grid.N
    spec = kernel.spectrum.reshape(shape)
    out = np.fft.ifft(np.fft.fft(rho, axis=axis) * spec, axis=axis)
    return out.real * kernel.grid.dx


def self_potential(rho: np.ndarray, kernel: KernelTable, mu: float = 1.0) -> np.ndarray:
    """Gravitational potential sourced by the mass density mu*rho.

    Returns Phi(x) = sum_j U(x - x_j) mu rho(x_j) dx, evaluated by FFT.
    """
    rho = np.asarray(rho, dtype=float)
    if rho.min() < -1e-12:
        raise ValueError(f"density has negative entries (min {rho.min():.3e})")
    rho = np.clip(rho, 0.0, None)
    return mu * convolve(rho, kernel)


def pair_potential_grid(
    grid: Grid1D, masses: tuple[float, float], gamma: float, kernel: KernelTable
) -> np.ndarray:
    """V(x1, x2) = -gamma mu1 mu2 U(x1 - x2) on the full product grid."""
    mu1, mu2 = masses
    if gamma == 0:
        return np.zeros((grid.N, grid.N))
    return -gamma * mu1 * mu2 * kernel.matrix()


@dataclass
class ResidualInteraction:
    V_res: np.ndarray
    mean12: float
    partial2: np.ndarray  # <V>_2(x1), averaged over particle 2
    partial1: np.ndarray  # <V>_1(x2), averaged over particle 1


def residual_interaction(
    V: np.ndarray, rho1: np.ndarray, rho2: np.ndarray, dx: float
) -> ResidualInteraction:
    """Split V into its additive part and the nonadditive residual."""
    partial2 = V @ rho2 * dx
    partial1 = rho1 @ V * dx
    mean12 = float(rho1 @ partial2 * dx)
    V_res = V - partial2[:, None] - partial1[None, :] + mean12
    return ResidualInteraction(V_res=V_res, mean12=mean12, partial2=partial2, partial1=partial1)
