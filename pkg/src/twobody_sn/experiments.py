"""Experiment drivers: single scenarios, mass-ratio scans, convergence studies
and the mean-field comparison."""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import diagnostics as diag
from .config import ScanConfig, ScenarioConfig, dump_config
from .errors import ConfigError
from .grid import make_grid
from .hartree import HartreePair, HartreePlan, compare, hartree_step
from .initial_states import InitialState, assemble_state
from .io import write_csv, write_field
from .potentials import Couplings, KernelTable
from .propagator import StepPlan, iterate, n_steps

log = logging.getLogger(__name__)

WORKERS_ENV = "TWOBODY_SN_WORKERS"
COMPARE_FIELDS = ("t", "S_vN_full", "S_vN_hartree", "L2_marginal_dist", "E_full", "E_hartree")


@dataclass
class Setup:
    config: ScenarioConfig
    kernel: KernelTable
    plan: StepPlan
    initial: InitialState

    @property
    def grid(self):
        return self.kernel.grid


def setup(config: ScenarioConfig) -> Setup:
    config.validate()
    grid = make_grid(config.grid.N, config.grid.L)
    kernel = KernelTable.build(grid, config.epsilon)
    masses = (config.masses.mu1, config.masses.mu2)
    couplings = Couplings(config.couplings.kappa, config.couplings.gamma)
    ini = config.initial
    initial = assemble_state(ini.kind, grid, kernel, ini.profile, ini.R0, ini.sigma0, masses,
                             couplings.kappa)
    plan = StepPlan.build(kernel, masses, couplings, config.time.dt)
    return Setup(config, kernel, plan, initial)


@dataclass
class RunResult:
    records: list
    summary: dict
    final_state: object = field(repr=False, default=None)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)


def _summary(records, initial: InitialState, config: ScenarioConfig) -> dict:
    s = np.array([r.S_vN for r in records])
    e = np.array([r.E_total for r in records])
    nrm = np.array([r.norm for r in records])
    ipk = int(np.argmax(s))
    e0 = e[0]
    return {
        "peak_S_vN": float(s[ipk]),
        "t_peak": float(records[ipk].t),
        "S_vN_initial": float(s[0]),
        "S_vN_final": float(s[-1]),
        "final_dx_mean": float(records[-1].dx_mean),
        "final_d_rel": float(records[-1].d_rel),
        "max_rel_energy_drift": float(np.max(np.abs(e - e0)) / abs(e0)) if e0 else float(np.max(np.abs(e - e0))),
        "max_norm_drift": float(np.max(np.abs(nrm - 1.0))),
        "overlap_s": [initial.overlap1, initial.overlap2],
        "n_records": len(records),
        "solver": config.solver,
    }


def run_scenario(config: ScenarioConfig, outdir=None, keep_spectrum: bool = False) -> RunResult:
    """Evolve one scenario, sampling diagnostics every ``time.sample_every`` steps.

    With ``outdir`` set, writes the CSV time series, ``summary.json``, the
    resolved ``config.yaml`` and SN2B field dumps every ``outputs.dump_every``.
    """
    su = setup(config)
    out = Path(outdir) if outdir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        dump_config(config, out / "config.yaml")
    if config.solver == "hartree":
        result = _run_hartree(su, out)
    else:
        result = _run_full(su, out, keep_spectrum)
    if out is not None:
        neg = config.outputs.negativity
        header = diag.CSV_FIELDS + (diag.NEG_FIELDS if neg else ())
        write_csv(out / config.outputs.csv, [r.row(neg) for r in result.records], header)
        if config.solver == "both":
            rows = compare_hartree(config, su)
            write_csv(out / "hartree_comparison.csv", rows, COMPARE_FIELDS)
            result.summary["hartree_max_S_vN"] = 0.0
            result.summary["max_L2_marginal_dist"] = max(r["L2_marginal_dist"] for r in rows)
        (out / "summary.json").write_text(json.dumps(result.summary, indent=2))
    return result


def _dump_steps(config: ScenarioConfig) -> int:
    if config.outputs.dump_every <= 0:
        return 0
    return max(1, int(round(config.outputs.dump_every / config.time.dt)))


def _dump_due(out, config, step) -> bool:
    every = _dump_steps(config)
    return out is not None and every > 0 and step % every == 0


def _dump(out, config, state):
    L = config.grid.L
    write_field(out / f"psi_t{state.t:08.3f}.sn2b", state.psi, L, state.t)
    if config.outputs.wigner:
        W = diag.wigner_relative(state)
        write_field(out / f"wrel_t{state.t:08.3f}.sn2b", W.W, L, state.t)


def _run_full(su: Setup, out, keep_spectrum) -> RunResult:
    cfg = su.config
    records = []
    state = su.initial.state
    for i, (state, sampled) in enumerate(iterate(state, su.plan, cfg.time.t_final, cfg.time.sample_every)):
        if sampled:
            rec = diag.record(state, su.plan, cfg.outputs.negativity, keep_spectrum)
            rec.validate()
            records.append(rec)
        if _dump_due(out, cfg, i):
            _dump(out, cfg, state)
    return RunResult(records, _summary(records, su.initial, cfg), state)


def _run_hartree(su: Setup, out) -> RunResult:
    cfg = su.config
    if cfg.initial.kind not in ("I", "II"):
        raise ConfigError("the Hartree solver needs a product initial state (kind I or II)")
    grid = su.grid
    a, b = su.initial.product_factors()
    masses = (cfg.masses.mu1, cfg.masses.mu2)
    hplan = HartreePlan.build(su.kernel, masses, su.plan.couplings, cfg.time.dt)
    pair = HartreePair(a, b, masses)
    nsteps = n_steps(cfg.time.t_final, cfg.time.dt)
    records = []
    for i in range(nsteps + 1):
        if i:
            pair = hartree_step(pair, hplan)
        if i % cfg.time.sample_every == 0 or i == nsteps:
            st = pair.to_state(grid)
            rec = diag.record(st, su.plan, cfg.outputs.negativity)
            rec.validate()
            records.append(rec)
        if _dump_due(out, cfg, i):
            _dump(out, cfg, pair.to_state(grid))
    return RunResult(records, _summary(records, su.initial, cfg), pair.to_state(grid))


def compare_hartree(config: ScenarioConfig, su: Setup | None = None, outdir=None) -> list[dict]:
    """Full model against its Hartree reduction from the same product factors."""
    su = su or setup(config)
    if config.initial.kind not in ("I", "II"):
        raise ConfigError("compare-hartree needs a product initial state (kind I or II)")
    a, b = su.initial.product_factors()
    masses = (config.masses.mu1, config.masses.mu2)
    rows = [asdict(r) for r in compare(a, b, su.kernel, masses, su.plan.couplings,
                                       config.time.dt, config.time.t_final, config.time.sample_every)]
    if outdir is not None:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "hartree_comparison.csv", rows, COMPARE_FIELDS)
        summary = {
            "full_peak_S_vN": max(r["S_vN_full"] for r in rows),
            "hartree_max_S_vN": max(r["S_vN_hartree"] for r in rows),
            "max_L2_marginal_dist": max(r["L2_marginal_dist"] for r in rows),
            "full_max_rel_energy_drift": _drift([r["E_full"] for r in rows]),
            "hartree_max_rel_energy_drift": _drift([r["E_hartree"] for r in rows]),
        }
        (out / "hartree_summary.json").write_text(json.dumps(summary, indent=2))
    return rows


def _drift(e):
    e = np.asarray(e)
    return float(np.max(np.abs(e - e[0])) / abs(e[0]))


# --- mass-ratio scan -------------------------------------------------------

SCAN_FIELDS = ("ratio", "profile", "peak_S_vN", "t_peak", "peak_PR2", "status")


def _scan_point(cfg_dict: dict):
    cfg = ScenarioConfig.from_dict(cfg_dict)
    try:
        res = run_scenario(cfg)
    except Exception as exc:  # one failed point must not abort the scan
        return None, f"{type(exc).__name__}: {exc}"
    return {k: res.column(k) for k in ("t", "S_vN", "PR2")}, "ok"


def scan_configs(scan: ScanConfig):
    for profile in scan.profiles:
        for ratio in scan.ratios:
            cfg = scan.base.replace(**{"masses.mu1": float(ratio) * scan.base.masses.mu2,
                                       "initial.profile": profile})
            yield ratio, profile, cfg


def worker_count(workers=None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    return max(1, int(workers))


@dataclass
class ScanResult:
    table: list
    series: dict  # (profile, ratio) -> {"t", "S_vN", "PR2"}


def run_scan(scan: ScanConfig, outdir=None, workers=None) -> ScanResult:
    """Peak entanglement and light-particle PR across mass ratios mu1/mu2."""
    scan.validate()
    points = list(scan_configs(scan))
    payloads = [cfg.to_dict() for _, _, cfg in points]
    nw = worker_count(workers)
    if nw > 1:
        with ProcessPoolExecutor(max_workers=nw) as pool:
            results = list(pool.map(_scan_point, payloads))
    else:
        results = [_scan_point(p) for p in payloads]

    table, series = [], {}
    for (ratio, profile, _), (data, status) in zip(points, results):
        if data is None:
            log.warning("scan point ratio=%s profile=%s failed: %s", ratio, profile, status)
            table.append(dict(ratio=ratio, profile=profile, peak_S_vN=None, t_peak=None,
                              peak_PR2=None, status=status))
            continue
        ipk = int(np.argmax(data["S_vN"]))
        table.append(dict(ratio=ratio, profile=profile, peak_S_vN=float(data["S_vN"][ipk]),
                          t_peak=float(data["t"][ipk]), peak_PR2=float(np.max(data["PR2"])),
                          status=status))
        series[(profile, ratio)] = data

    if outdir is not None:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        dump_config(scan, out / "scan.yaml")
        write_csv(out / "scan_summary.csv", table, SCAN_FIELDS)
        for (profile, ratio), data in series.items():
            rows = [dict(t=t, S_vN=s, PR2=p) for t, s, p in zip(data["t"], data["S_vN"], data["PR2"])]
            write_csv(out / f"scan_{profile}_ratio{ratio:g}.csv", rows, ("t", "S_vN", "PR2"))
    return ScanResult(table, series)


# --- convergence study -----------------------------------------------------

CONVERGENCE_FIELDS = ("refinement", "N", "L", "dt", "peak_S_vN", "delta_peak_S_vN",
                      "final_dx_mean", "delta_final_dx_mean", "final_d_rel", "delta_final_d_rel")


def refinements(config: ScenarioConfig) -> dict[str, ScenarioConfig]:
    """Baseline plus one-at-a-time refinements of N, L and dt.

    The sampling interval in time is held fixed so peaks are taken over the
    same instants. Extending L at fixed N would coarsen dx (N must stay a
    power of two), so the domain extension also doubles N; the spacing then
    never gets coarser than the baseline's.
    """
    base = config
    return {
        "baseline": base,
        "N_doubled": base.replace(**{"grid.N": base.grid.N * 2}),
        "L_extended": base.replace(**{"grid.L": base.grid.L * 1.5, "grid.N": base.grid.N * 2}),
        "dt_halved": base.replace(**{"time.dt": base.time.dt / 2,
                                     "time.sample_every": base.time.sample_every * 2}),
    }


def run_convergence(config: ScenarioConfig, outdir=None, only=None) -> list[dict]:
    runs = refinements(config)
    if only is not None:
        runs = {k: v for k, v in runs.items() if k == "baseline" or k in only}
    results = {name: run_scenario(cfg).summary for name, cfg in runs.items()}
    ref = results["baseline"]
    rows = []
    for name, cfg in runs.items():
        s = results[name]
        rows.append(dict(
            refinement=name, N=cfg.grid.N, L=cfg.grid.L, dt=cfg.time.dt,
            peak_S_vN=s["peak_S_vN"], delta_peak_S_vN=abs(s["peak_S_vN"] - ref["peak_S_vN"]),
            final_dx_mean=s["final_dx_mean"],
            delta_final_dx_mean=abs(s["final_dx_mean"] - ref["final_dx_mean"]),
            final_d_rel=s["final_d_rel"], delta_final_d_rel=abs(s["final_d_rel"] - ref["final_d_rel"]),
        ))
    if outdir is not None:
        out = Path(outdir)
        out.mkdir(parents=True, exist_ok=True)
        write_csv(out / "convergence.csv", rows, CONVERGENCE_FIELDS)
    return rows
