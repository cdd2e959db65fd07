"""Containers for one- and two-particle wavefunctions."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .grid import Grid1D


@dataclass
class SingleProfile:
    amplitude: np.ndarray
    grid: Grid1D
    kind: str  # "gaussian" or "stationary"
    center: float = 0.0
    mu: float = 1.0
    sigma0: float = 1.0

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2

    def norm(self) -> float:
        return float(np.sum(self.density) * self.grid.dx)


@dataclass
class TwoBodyState:
    """Joint amplitude psi[i, j] = Psi(x1_i, x2_j); x1 is the slow axis."""

    psi: np.ndarray
    grid: Grid1D
    masses: tuple[float, float] = (1.0, 1.0)
    t: float = 0.0

    def norm(self) -> float:
        return float(np.vdot(self.psi, self.psi).real * self.grid.dx**2)

    def normalized(self) -> "TwoBodyState":
        return replace(self, psi=self.psi / np.sqrt(self.norm()))

    def copy(self) -> "TwoBodyState":
        return replace(self, psi=self.psi.copy())

    def swapped(self) -> "TwoBodyState":
        """Exchange the particle labels."""
        return replace(self, psi=self.psi.T.copy(), masses=self.masses[::-1])

    @classmethod
    def product(cls, phi1: np.ndarray, phi2: np.ndarray, grid: Grid1D,
                masses=(1.0, 1.0), t: float = 0.0) -> "TwoBodyState":
        return cls(psi=np.multiply.outer(phi1, phi2).astype(complex), grid=grid,
                   masses=tuple(masses), t=t)
