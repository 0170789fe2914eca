"""Command-line entry points: simulate, compare, check-gains.

Exit codes: 0 success, 1 configuration error, 2 divergence, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, default_config_path, load_config
from .controllers import check_gain_conditions
from .plant import DivergenceError
from . import simulate as sim

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DIVERGENCE = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flexgrasp",
                                description="Dual flexible-arm grasping simulator")
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("simulate", help="run one closed-loop scenario")
    ps.add_argument("--config", type=Path, help="scenario config file")
    ps.add_argument("--out", type=Path, required=True, help="output directory")
    ps.add_argument("--scenario", choices=("nabfc", "pds", "pd"),
                    help="controller (overrides config)")
    ps.add_argument("--grid", type=int, help="interior node count override")
    ps.add_argument("--dt", type=float, help="time step override [s]")
    ps.add_argument("--duration", type=float, help="run length override [s]")
    ps.add_argument("--seed", type=int, help="network placement seed override")

    pc = sub.add_parser("compare", help="compare trace CSVs from prior runs")
    pc.add_argument("--out", type=Path, help="directory for the report file")
    pc.add_argument("traces", nargs="+", type=Path, help="trace.csv paths")

    pg = sub.add_parser("check-gains", help="print feasibility-condition margins")
    pg.add_argument("--config", type=Path, help="scenario config file")
    return p


def _load(args) -> "sim.ScenarioConfig":
    path = args.config
    if path is None:
        path = default_config_path(getattr(args, "scenario", None) or "nabfc")
    overrides = {}
    if getattr(args, "scenario", None):
        overrides["scenario"] = args.scenario
    if getattr(args, "grid", None) is not None:
        overrides["n_interior"] = args.grid
    if getattr(args, "dt", None) is not None:
        overrides["dt"] = args.dt
    if getattr(args, "duration", None) is not None:
        overrides["duration"] = args.duration
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    return load_config(path, overrides)


def cmd_simulate(args) -> int:
    try:
        config = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if config.scenario == "nabfc":
        report = check_gain_conditions(config.nabfc, config.analysis, config.plant)
        failing = [c for c in report if not c.ok]
        if failing:
            print("warning: feasibility conditions failing for NABFC gains:", file=sys.stderr)
            for c in failing:
                print(f"  {c.label}: margin {c.margin:.4g}", file=sys.stderr)

    try:
        args.out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        result = sim.run_scenario(config)
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        partial = getattr(exc, "partial_trace", None)
        if partial is not None:
            try:
                sim.emit_csv(partial, args.out / f"trace_{config.scenario}_partial.csv")
            except OSError:
                pass
        return EXIT_DIVERGENCE

    try:
        stem = f"trace_{config.scenario}"
        csv_path = sim.emit_csv(result.trace, args.out / f"{stem}.csv")
        sim.write_summary(result, args.out / f"{stem}.summary.json")
        sim.emit_plots(result.trace, args.out)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    s = result.summary
    print(f"scenario {s['scenario']}: duration {s['duration']:.3f} s")
    lam = s["settling_lambda"]
    lam_txt = ", ".join("n/a" if v is None else f"{v:.3f}s" for v in lam)
    print(f"  contact-force settling (5% band): {lam_txt}")
    print(f"  peak |v| cmd/act: {s['peak_v_cmd']:.3g} / {s['peak_v_act']:.3g} N")
    print(f"  peak |tau| cmd/act: {s['peak_tau_cmd']:.3g} / {s['peak_tau_act']:.3g} N m")
    print(f"  trace: {csv_path}")
    return EXIT_OK


def cmd_compare(args) -> int:
    traces = []
    for path in args.traces:
        if not path.exists():
            print(f"i/o error: no such trace {path}", file=sys.stderr)
            return EXIT_IO
        traces.append(sim.load_trace_csv(path))
    try:
        report = sim.compare(traces)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = sim.format_compare(report)
    print(text)
    if args.out is not None:
        try:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / "compare.txt").write_text(text + "\n")
        except OSError as exc:
            print(f"i/o error: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK


def cmd_check_gains(args) -> int:
    try:
        config = _load(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = check_gain_conditions(config.nabfc, config.analysis, config.plant)
    width = max(len(c.label) for c in report)
    for c in report:
        status = "ok  " if c.ok else "FAIL"
        print(f"{status} {c.label:<{width}s} margin {c.margin:+.6g}")
    print(f"{sum(c.ok for c in report)}/{len(report)} conditions hold")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        return cmd_simulate(args)
    if args.command == "compare":
        return cmd_compare(args)
    return cmd_check_gains(args)


if __name__ == "__main__":
    sys.exit(main())
