"""Static figures from run and scan artifacts."""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import TwoSlopeNorm  # noqa: E402

from . import diagnostics as diag  # noqa: E402
from .config import load_config, load_scan  # noqa: E402
from .grid import make_grid  # noqa: E402
from .io import read_csv, read_field  # noqa: E402
from .state import TwoBodyState  # noqa: E402

log = logging.getLogger(__name__)


def _snapshot(path: Path, masses, out: Path) -> Path:
    psi, L, t = read_field(path)
    grid = make_grid(psi.shape[0], L)
    state = TwoBodyState(psi, grid, masses, t)
    rho1, rho2 = diag.marginals(state)
    wpath = path.with_name(path.name.replace("psi_", "wrel_"))
    if wpath.exists():
        W = read_field(wpath)[0].real
        p = np.pi / L * np.fft.fftshift(np.fft.fftfreq(grid.N, d=1.0 / grid.N))
    else:
        wf = diag.wigner_relative(state)
        W, p = wf.W, wf.p
    x = grid.x
    fig, ax = plt.subplots(3, 1, figsize=(4, 10))
    ext = [x[0], x[-1], x[0], x[-1]]
    ax[0].imshow(np.abs(psi.T) ** 2, origin="lower", extent=ext, cmap="viridis", aspect="auto")
    ax[0].set(xlabel="$x_1$", ylabel="$x_2$", title=f"t = {t:g}")
    ax[1].plot(x, rho1, color="tab:blue", label=r"$\rho_1$")
    ax[1].plot(x, rho2, color="tab:red", label=r"$\rho_2$")
    ax[1].set(xlabel="x")
    ax[1].legend()
    vmax = max(np.abs(W).max(), 1e-300)
    ax[2].imshow(W.T, origin="lower", extent=[x[0], x[-1], p[0], p[-1]], aspect="auto",
                 cmap="RdBu_r", norm=TwoSlopeNorm(0.0, -vmax, vmax))
    ax[2].set(xlabel="r", ylabel=r"$p_{rel}$")
    fig.tight_layout()
    target = out / f"snapshot_t{t:08.3f}.png"
    fig.savefig(target, dpi=80)
    plt.close(fig)
    return target


def plot_run(run_dir, out=None) -> list[Path]:
    """Snapshot panels for every field dump plus the entropy/Schmidt time series."""
    run_dir = Path(run_dir)
    out = Path(out) if out else run_dir
    out.mkdir(parents=True, exist_ok=True)
    cfg = load_config(run_dir / "config.yaml")
    data = read_csv(run_dir / cfg.outputs.csv)
    if not data:
        raise FileNotFoundError(f"no time series in {run_dir}")
    masses = (cfg.masses.mu1, cfg.masses.mu2)
    made = [_snapshot(p, masses, out) for p in sorted(run_dir.glob("psi_t*.sn2b"))]

    neg_cols = [k for k in diag.NEG_FIELDS if k in data and np.isfinite(data[k]).any()]
    nrow = 3 if neg_cols else 2
    if not neg_cols:
        log.info("no negativity columns in %s; negativity panel skipped", run_dir)
    fig, ax = plt.subplots(nrow, 1, figsize=(6, 3 * nrow), sharex=True)
    t = data["t"]
    ax[0].plot(t, data["S_vN"], label=r"$S_{vN}$")
    ax[0].plot(t, data["S_L"], label=r"$S_L$")
    ax[0].legend()
    for k in ("lambda1", "lambda2", "lambda3"):
        ax[1].plot(t, data[k], label=k)
    ax[1].legend()
    if neg_cols:
        for k in neg_cols:
            ax[2].plot(t, data[k], label=k)
        ax[2].legend()
    ax[-1].set_xlabel("t")
    fig.tight_layout()
    target = out / "timeseries.png"
    fig.savefig(target, dpi=80)
    plt.close(fig)
    made.append(target)
    return made


def plot_scan(scan_dir, out=None) -> list[Path]:
    """PR and entropy heatmaps per profile plus the peak-entropy curve."""
    scan_dir = Path(scan_dir)
    out = Path(out) if out else scan_dir
    out.mkdir(parents=True, exist_ok=True)
    scan = load_scan(scan_dir / "scan.yaml")
    made = []
    peaks = {}
    for profile in scan.profiles:
        ratios, s_rows, pr_rows, t = [], [], [], None
        for ratio in scan.ratios:
            path = scan_dir / f"scan_{profile}_ratio{ratio:g}.csv"
            if not path.exists():
                continue
            d = read_csv(path)
            ratios.append(ratio)
            s_rows.append(d["S_vN"])
            pr_rows.append(d["PR2"])
            t = d["t"]
        if not ratios:
            continue
        peaks[profile] = (ratios, [r.max() for r in s_rows])
        for name, rows in (("PR2", pr_rows), ("S_vN", s_rows)):
            fig, ax = plt.subplots(figsize=(6, 3.5))
            im = ax.pcolormesh(t, ratios, np.array(rows), shading="nearest", cmap="magma")
            fig.colorbar(im, ax=ax, label=name)
            ax.set(xlabel="t", ylabel=r"$\mu_1/\mu_2$", title=f"{profile}: {name}")
            fig.tight_layout()
            target = out / f"heatmap_{profile}_{name}.png"
            fig.savefig(target, dpi=80)
            plt.close(fig)
            made.append(target)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for profile, (ratios, pk) in peaks.items():
        ax.plot(ratios, pk, "o-", label=profile)
    ax.set(xlabel=r"$\mu_1/\mu_2$", ylabel=r"max$_t S_{vN}$")
    ax.legend()
    fig.tight_layout()
    target = out / "peak_entropy.png"
    fig.savefig(target, dpi=80)
    plt.close(fig)
    made.append(target)
    return made


def emit_plots(artifact_dir, out=None) -> list[Path]:
    artifact_dir = Path(artifact_dir)
    if (artifact_dir / "scan.yaml").exists():
        return plot_scan(artifact_dir, out)
    if (artifact_dir / "config.yaml").exists():
        return plot_run(artifact_dir, out)
    raise FileNotFoundError(f"{artifact_dir} holds neither run nor scan artifacts")
