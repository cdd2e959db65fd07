"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import ScanConfig, ScenarioConfig, load_config, load_scan
from .errors import ConfigError, NumericalError

EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 2, 3, 4

# flag -> dotted config path
_FLAGS = {
    "N": ("grid.N", int), "L": ("grid.L", float), "epsilon": ("epsilon", float),
    "mu1": ("masses.mu1", float), "mu2": ("masses.mu2", float),
    "kappa": ("couplings.kappa", float), "gamma": ("couplings.gamma", float),
    "kind": ("initial.kind", str), "profile": ("initial.profile", str),
    "R0": ("initial.R0", float), "sigma0": ("initial.sigma0", float),
    "dt": ("time.dt", float), "t_final": ("time.t_final", float),
    "sample_every": ("time.sample_every", int),
    "csv": ("outputs.csv", str), "dump_every": ("outputs.dump_every", float),
    "solver": ("solver", str),
}


def _add_scenario_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="YAML scenario file; flags override it")
    for name, (_, typ) in _FLAGS.items():
        p.add_argument(f"--{name.replace('_', '-')}", dest=name, type=typ, default=None)
    p.add_argument("--wigner", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--negativity", action=argparse.BooleanOptionalAction, default=None)


def scenario_from_args(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else ScenarioConfig()
    updates = {path: getattr(args, name) for name, (path, _) in _FLAGS.items()
               if getattr(args, name, None) is not None}
    for flag in ("wigner", "negativity"):
        if getattr(args, flag, None) is not None:
            updates[f"outputs.{flag}"] = getattr(args, flag)
    return cfg.replace(**updates) if updates else cfg.validate()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twobody-sn", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground-state", help="solve the stationary one-body SN profile")
    _add_scenario_flags(p)
    p.add_argument("--mu", type=float, default=None, help="mass (default: mu1)")
    p.add_argument("--out", type=Path, default=Path("ground_state.sn2b"))

    p = sub.add_parser("run", help="evolve one scenario")
    _add_scenario_flags(p)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("scan", help="mass-ratio scan")
    _add_scenario_flags(p)
    p.add_argument("--scan-config", type=Path, help="YAML scan file")
    p.add_argument("--ratios", type=float, nargs="+")
    p.add_argument("--profiles", nargs="+")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("converge", help="grid / domain / time-step refinement study")
    _add_scenario_flags(p)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("plot", help="render figures from run or scan artifacts")
    p.add_argument("artifacts", type=Path)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("compare-hartree", help="full model vs Hartree reduction")
    _add_scenario_flags(p)
    p.add_argument("--out", type=Path, required=True)
    return parser


def _dispatch(args) -> int:
    from . import experiments as ex

    if args.command == "plot":
        from .plotting import emit_plots

        for path in emit_plots(args.artifacts, args.out):
            print(path)
        return 0

    cfg = scenario_from_args(args)
    if args.command == "ground-state":
        from .grid import make_grid
        from .initial_states import ground_state_sn
        from .io import write_field
        from .potentials import KernelTable

        grid = make_grid(cfg.grid.N, cfg.grid.L)
        kernel = KernelTable.build(grid, cfg.epsilon)
        mu = args.mu if args.mu is not None else cfg.masses.mu1
        res = ground_state_sn(grid, mu, cfg.couplings.kappa, kernel, seed_sigma=cfg.initial.sigma0)
        write_field(args.out, res.profile.amplitude, grid.L, 0.0)
        print(json.dumps({"omega": res.omega, "residual": res.residual, "iterations": res.iterations}))
    elif args.command == "run":
        res = ex.run_scenario(cfg, args.out)
        print(json.dumps(res.summary, indent=2))
    elif args.command == "scan":
        scan = load_scan(args.scan_config) if args.scan_config else ScanConfig(base=cfg)
        if args.ratios:
            scan.ratios = list(args.ratios)
        if args.profiles:
            scan.profiles = list(args.profiles)
        result = ex.run_scan(scan, args.out, args.workers)
        for row in result.table:
            print(row)
    elif args.command == "converge":
        for row in ex.run_convergence(cfg, args.out):
            print(row)
    elif args.command == "compare-hartree":
        rows = ex.compare_hartree(cfg, outdir=args.out)
        print(json.dumps(rows[-1]))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
