"""Observables of the two-body state: Schmidt spectrum, entropies, Wigner
functions, separations and participation ratios."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import NotProductState, NumericalError
from .grid import Grid1D
from .potentials import residual_interaction
from .propagator import EnergyBreakdown, StepPlan, energy
from .state import TwoBodyState

EIG_FLOOR = 1e-14


def marginals(state: TwoBodyState) -> tuple[np.ndarray, np.ndarray]:
    dens = np.abs(state.psi) ** 2
    dx = state.grid.dx
    return dens.sum(axis=1) * dx, dens.sum(axis=0) * dx


# --- Schmidt spectrum -------------------------------------------------------

@dataclass
class SchmidtSpectrum:
    eigenvalues: np.ndarray  # descending, every singular value squared
    threshold: float = EIG_FLOOR

    @property
    def retained(self) -> np.ndarray:
        lam = self.eigenvalues
        return lam[lam >= self.threshold]

    @property
    def count(self) -> int:
        return int(self.retained.size)

    def leading(self, n: int = 3) -> np.ndarray:
        out = np.zeros(n)
        m = min(n, self.eigenvalues.size)
        out[:m] = self.eigenvalues[:m]
        return out


def schmidt(state: TwoBodyState, threshold: float = EIG_FLOOR) -> SchmidtSpectrum:
    """Schmidt weights from the SVD of the quadrature-weighted amplitude psi*dx."""
    psi = state.psi
    if not np.all(np.isfinite(psi)):
        raise FloatingPointError("non-finite entries in the wavefunction")
    s = np.linalg.svd(psi * state.grid.dx, compute_uv=False)
    return SchmidtSpectrum(eigenvalues=s**2, threshold=threshold)


def entropies(spectrum: SchmidtSpectrum) -> tuple[float, float]:
    """(von Neumann entropy in nats, linear entropy 1 - sum lambda^2)."""
    lam = spectrum.retained
    s_vn = float(-np.sum(lam * np.log(lam)))
    s_lin = float(1.0 - np.sum(spectrum.eigenvalues**2))
    # both clipped at zero: a product state can round to -1e-16
    return max(s_vn, 0.0), max(s_lin, 0.0)


# --- short-time expansion ---------------------------------------------------

@dataclass
class ShortTimeCoefficient:
    residual_form: float  # 2 <V_res^2>_12
    variance_form: float  # 2 [V12(V) - V1(<V>_2) - V2(<V>_1)]

    @property
    def value(self) -> float:
        return self.residual_form


def short_time_coefficient(state0: TwoBodyState, pair_field: np.ndarray,
                           tol: float = 1e-12) -> ShortTimeCoefficient:
    """Coefficient c of S_L(t) = c t^2 + O(t^3) for a product initial state."""
    lam2 = schmidt(state0).leading(2)[1]
    if lam2 >= tol:
        raise NotProductState(f"second Schmidt weight {lam2:.3e} >= {tol:.0e}")
    rho1, rho2 = marginals(state0)
    dx = state0.grid.dx
    res = residual_interaction(pair_field, rho1, rho2, dx)
    w = np.outer(rho1, rho2) * dx * dx
    c_res = 2.0 * float(np.sum(w * res.V_res**2))

    var12 = float(np.sum(w * pair_field**2)) - res.mean12**2
    var1 = float(np.sum(rho1 * res.partial2**2) * dx) - float(np.sum(rho1 * res.partial2) * dx) ** 2
    var2 = float(np.sum(rho2 * res.partial1**2) * dx) - float(np.sum(rho2 * res.partial1) * dx) ** 2
    return ShortTimeCoefficient(c_res, 2.0 * (var12 - var1 - var2))


# --- Wigner functions -------------------------------------------------------

@dataclass
class WignerFunction:
    W: np.ndarray  # W[i, n] at (x_i, p_n), p ascending
    x: np.ndarray
    p: np.ndarray
    dx: float
    dp: float

    def integral(self) -> float:
        return float(self.W.sum() * self.dx * self.dp)

    def position_marginal(self) -> np.ndarray:
        return self.W.sum(axis=1) * self.dp

    def momentum_marginal(self) -> np.ndarray:
        return self.W.sum(axis=0) * self.dx

    def negativity(self) -> float:
        return wigner_negativity(self.W, self.dx, self.dp)


def wigner_from_kernel(rho: np.ndarray, grid: Grid1D) -> WignerFunction:
    """W(x, p) = (1/pi) sum_y rho(x+y, x-y) exp(-2ipy) dx with y on the x grid.

    The p grid has N points spaced pi/L, covering [-N pi/2L, N pi/2L).
    Only chords with |2y| < L/2 enter; longer ones would pair each point with
    the periodic image of the state and add a sign-alternating ghost at x - L/2.
    """
    n = grid.N
    dx = grid.dx
    i = np.arange(n)[:, None]
    m = np.fft.fftfreq(n, d=1.0 / n).astype(int)[None, :]
    g = rho[(i + m) % n, (i - m) % n] * (np.abs(m) < n // 4)
    W = np.fft.fftshift(np.fft.fft(g, axis=1), axes=1).real * dx / np.pi
    p = np.pi / grid.L * np.fft.fftshift(np.fft.fftfreq(n, d=1.0 / n))
    return WignerFunction(W=W, x=grid.x.copy(), p=p, dx=dx, dp=np.pi / grid.L)


def reduced_density(state: TwoBodyState, which: int = 1) -> np.ndarray:
    """Kernel rho_red(x, x') of particle ``which`` (1 or 2)."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    psi = state.psi if which == 1 else state.psi.T
    return psi @ psi.conj().T * state.grid.dx


def wigner_reduced(state: TwoBodyState, which: int = 1) -> WignerFunction:
    return wigner_from_kernel(reduced_density(state, which), state.grid)


def relative_amplitude(state: TwoBodyState, masses=None, method: str = "spectral") -> np.ndarray:
    """A[X_i, r_j] = Psi(X_i + a r_j, X_i - b r_j), a = mu2/M, b = mu1/M.

    ``method="spectral"`` evaluates the off-grid arguments by trigonometric
    interpolation; ``"linear"`` uses periodic bilinear interpolation.
    """
    grid = state.grid
    mu1, mu2 = state.masses if masses is None else masses
    a = mu2 / (mu1 + mu2)
    b = mu1 / (mu1 + mu2)
    psi = state.psi
    n = grid.N
    r = grid.x
    if method == "linear":
        from scipy.ndimage import map_coordinates

        X = grid.x[:, None]
        i1, i2 = np.broadcast_arrays((X + a * r[None, :] - grid.x[0]) / grid.dx,
                                     (X - b * r[None, :] - grid.x[0]) / grid.dx)
        coords = [i1, i2]
        return (map_coordinates(psi.real, coords, order=1, mode="grid-wrap")
                + 1j * map_coordinates(psi.imag, coords, order=1, mode="grid-wrap"))
    if method != "spectral":
        raise ValueError(f"unknown interpolation method {method!r}")
    k = grid.k
    spec = np.fft.fft2(psi)
    base = np.exp(1j * np.outer(grid.x - grid.x[0], k))  # [X, k1]
    out = np.empty((n, n), dtype=complex)
    for j in range(n):
        rows = np.fft.ifft(spec * np.exp(-1j * k * b * r[j])[None, :], axis=1)  # [k1, x2]
        out[:, j] = np.einsum("ik,ki->i", base * np.exp(1j * k * a * r[j])[None, :], rows) / n
    return out


def relative_density(state: TwoBodyState, masses=None, method: str = "spectral") -> np.ndarray:
    """rho_rel(r, r') with the centre of mass traced out."""
    A = relative_amplitude(state, masses, method)
    return A.T @ A.conj() * state.grid.dx


def wigner_relative(state: TwoBodyState, masses=None, method: str = "spectral") -> WignerFunction:
    """Wigner function of the relative coordinate r = x1 - x2."""
    return wigner_from_kernel(relative_density(state, masses, method), state.grid)


def wigner_negativity(W: np.ndarray, dx: float, dp: float) -> float:
    return float(np.sum(np.clip(W, None, 0.0)) * -dx * dp)


# --- separations and localization -------------------------------------------

def separations(state: TwoBodyState) -> tuple[float, float]:
    """(|<x1> - <x2>|, sqrt(<(x1 - x2)^2>)) using raw grid coordinates."""
    x = state.grid.x
    dx = state.grid.dx
    rho1, rho2 = marginals(state)
    m1 = float(rho1 @ x) * dx
    m2 = float(rho2 @ x) * dx
    dens = np.abs(state.psi) ** 2
    d2 = float(np.sum(dens * np.subtract.outer(x, x) ** 2)) * dx * dx
    return abs(m1 - m2), float(np.sqrt(d2))


def participation_ratio(rho: np.ndarray, dx: float) -> float:
    return float(1.0 / (np.sum(np.asarray(rho) ** 2) * dx))


# --- per-sample record ------------------------------------------------------

CSV_FIELDS = ("t", "norm", "E_total", "E_kin", "E_pair", "E_self1", "E_self2", "S_vN", "S_L",
              "lambda1", "lambda2", "lambda3", "dx_mean", "d_rel", "PR1", "PR2")
NEG_FIELDS = ("neg1", "neg2", "neg_rel")


@dataclass
class DiagnosticsRecord:
    t: float
    norm: float
    E_total: float
    E_kin: float
    E_pair: float
    E_self1: float
    E_self2: float
    S_vN: float
    S_L: float
    lambda1: float
    lambda2: float
    lambda3: float
    dx_mean: float
    d_rel: float
    PR1: float
    PR2: float
    neg1: float | None = None
    neg2: float | None = None
    neg_rel: float | None = None
    spectrum: np.ndarray | None = field(default=None, repr=False, compare=False)

    def validate(self) -> None:
        if self.S_vN < 0 or not 0 <= self.S_L < 1:
            raise NumericalError(f"entropy out of range at t={self.t}: {self.S_vN}, {self.S_L}")
        if not self.lambda1 >= self.lambda2 >= self.lambda3 >= 0:
            raise NumericalError(f"Schmidt weights not descending at t={self.t}")

    def row(self, with_negativity: bool = False) -> dict:
        d = asdict(self)
        d.pop("spectrum")
        keys = CSV_FIELDS + (NEG_FIELDS if with_negativity else ())
        return {k: d[k] for k in keys}


def record(state: TwoBodyState, plan: StepPlan, negativity: bool = False,
           keep_spectrum: bool = False) -> DiagnosticsRecord:
    """Evaluate every tracked observable on one snapshot."""
    spec = schmidt(state)
    s_vn, s_lin = entropies(spec)
    lam = spec.leading(3)
    e: EnergyBreakdown = energy(state, plan)
    dxm, drel = separations(state)
    rho1, rho2 = marginals(state)
    dx = state.grid.dx
    rec = DiagnosticsRecord(
        t=state.t, norm=e.norm, E_total=e.E_total, E_kin=e.E_kin, E_pair=e.E_pair,
        E_self1=e.E_self1, E_self2=e.E_self2, S_vN=s_vn, S_L=s_lin,
        lambda1=lam[0], lambda2=lam[1], lambda3=lam[2], dx_mean=dxm, d_rel=drel,
        PR1=participation_ratio(rho1, dx), PR2=participation_ratio(rho2, dx),
        spectrum=spec.eigenvalues if keep_spectrum else None,
    )
    if negativity:
        rec.neg1 = wigner_reduced(state, 1).negativity()
        rec.neg2 = wigner_reduced(state, 2).negativity()
        rec.neg_rel = wigner_relative(state).negativity()
    return rec
