"""Command-line front end.

Protocol lines follow the incomplete-solver convention: "o <cost>" on every
improvement, then "s SATISFIABLE" with a "v <bitstring>" witness (one 0/1
character per variable, in index order) or "s UNKNOWN". Diagnostics go to
stderr so stdout stays machine-parseable.
"""
from __future__ import annotations

import argparse
import json
import shlex
import sys
from time import perf_counter
from typing import List, Optional, Tuple

from .bench import format_report, run_benchmark
from .dynamics import weight_dynamics, write_csv
from .formula import INF, ParseError, load_wcnf
from .oracle import TooManyVariables, brute_force_opt
from .search import ConfigError, SolverConfig, solve


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.add_argument("--max-flips", type=int, default=None, metavar="N")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--k", type=int, default=None, help="BMS sample count")
    p.add_argument("--h-inc", type=float, default=None, help="hard-clause weight increment")
    p.add_argument("--delta", type=float, default=None, help="multiplicative weight proportion")
    p.add_argument("--mode", choices=["spb", "constant", "all-adaptive"], default="spb")
    p.add_argument("--preset", choices=["auto", "pms", "wpms"], default="auto")
    p.add_argument("--init", choices=["decimation", "random"], default="decimation")
    p.add_argument("--decay-threshold", type=float, default=1e7)
    p.add_argument("--decay-factor", type=float, default=0.5)


def _config_from_args(args) -> SolverConfig:
    cutoff = args.time_limit
    if cutoff is None and args.max_flips is None:
        cutoff = 60.0
    return SolverConfig(
        k=args.k,
        h_inc=args.h_inc,
        delta=args.delta,
        mode=args.mode.replace("-", "_"),
        decay_threshold=args.decay_threshold,
        decay_factor=args.decay_factor,
        cutoff_seconds=cutoff,
        max_flips=args.max_flips,
        seed=args.seed,
        init=args.init,
        preset=args.preset,
    )


def _parse_configs(specs: List[str]) -> List[Tuple[str, SolverConfig]]:
    """Parse bench --config entries of the form "label=<solver flags>",
    several entries separated by ";"."""
    parser = argparse.ArgumentParser(prog="config", add_help=False)
    _add_solver_flags(parser)
    out = []
    for spec in specs:
        for entry in spec.split(";"):
            entry = entry.strip()
            if not entry:
                continue
            label, _, flags = entry.partition("=")
            if not label:
                raise ConfigError(f"bad --config entry {entry!r}")
            args = parser.parse_args(shlex.split(flags))
            cfg = _config_from_args(args)
            if args.time_limit is None and args.max_flips is None:
                cfg.cutoff_seconds = None  # inherit the bench-wide limit
            out.append((label.strip(), cfg))
    return out


def cmd_solve(args) -> int:
    formula = load_wcnf(args.file)
    cfg = _config_from_args(args)
    t0 = perf_counter()

    def emit(cost: int) -> None:
        print(f"o {cost}", flush=True)

    result = solve(formula, cfg, on_improvement=emit)
    if result.feasible:
        print("s SATISFIABLE")
        print(f"v {result.bitstring()}", flush=True)
    else:
        print("s UNKNOWN", flush=True)
    elapsed = perf_counter() - t0
    rate = result.flips / elapsed if elapsed > 0 else 0.0
    print(
        f"flips={result.flips} time={elapsed:.3f}s rate={rate:.0f}/s "
        f"termination={result.termination} preset={result.config.preset}",
        file=sys.stderr,
    )
    return 0


def cmd_oracle(args) -> int:
    formula = load_wcnf(args.file)
    cost, _witness = brute_force_opt(formula)
    if cost == INF:
        print("s UNSATISFIABLE")
    else:
        print(f"o {cost}")
    return 0


def cmd_bench(args) -> int:
    configs = _parse_configs(args.config) if args.config else [("default", SolverConfig())]
    bkc = None
    if args.bkc:
        with open(args.bkc) as fh:
            bkc = {k: int(v) for k, v in json.load(fh).items()}
    report = run_benchmark(
        args.dir,
        configs,
        time_limit=args.time_limit,
        parallelism=args.jobs,
        bkc=bkc,
        out_dir=args.out,
    )
    print(format_report(report))
    return 0


def cmd_dynamics(args) -> int:
    rows = weight_dynamics(args.delta, args.steps)
    if args.out:
        with open(args.out, "w") as fh:
            write_csv(rows, fh)
    else:
        write_csv(rows, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spb-maxsat",
        description="Local search WPMS solver with soft-conflict weighting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run the local search on one instance")
    p.add_argument("file")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="exact optimum by enumeration (small instances)")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run solver configs over an instance directory")
    p.add_argument("--dir", required=True)
    p.add_argument("--time-limit", type=float, default=60.0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--bkc", default=None, help="JSON file mapping instance name to reference cost")
    p.add_argument("--config", action="append", default=None,
                   help='e.g. "fast=--preset wpms --seed 3;const=--mode constant"')
    p.add_argument("--out", default=None, help="directory for runs.jsonl and report.json")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("dynamics", help="emit weight-growth metrics as CSV")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_dynamics)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ConfigError, TooManyVariables, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
