"""Periodic one-dimensional grid shared by both particle axes."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def periodic_min_distance(r, L: float):
    """Wrap a displacement into the half-open interval [-L/2, L/2)."""
    r = np.asarray(r, dtype=float)
    out = np.mod(r + 0.5 * L, L) - 0.5 * L
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class Grid1D:
    N: int
    L: float
    x: np.ndarray = field(repr=False, compare=False)
    k: np.ndarray = field(repr=False, compare=False)

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.L

    def offsets(self) -> np.ndarray:
        """Wrapped displacement x_m - x_0 for every index offset m."""
        return periodic_min_distance(np.arange(self.N) * self.dx, self.L)


def make_grid(N: int, L: float) -> Grid1D:
    """Build a grid with x_j = -L/2 + j*dx and FFT-ordered wavenumbers."""
    if int(N) != N or N < 8 or N % 2:
        raise ValueError(f"N must be an even integer >= 8, got {N!r}")
    if N & (N - 1):
        raise ValueError(f"N must be a power of two, got {N}")
    if not L > 0:
        raise ValueError(f"L must be positive, got {L!r}")
    N = int(N)
    L = float(L)
    dx = L / N
    x = -0.5 * L + dx * np.arange(N)
    k = 2.0 * np.pi * np.fft.fftfreq(N, d=dx)
    x.setflags(write=False)
    k.setflags(write=False)
    return Grid1D(N=N, L=L, x=x, k=k)
