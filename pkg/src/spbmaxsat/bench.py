"""Batch benchmark harness: run solver configurations over a directory of
WCNF instances, persist per-run records, and aggregate the comparison
metrics (#win per solver, mean time-to-best, mean score)."""
from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from time import perf_counter
from typing import Dict, List, Optional, Sequence, Tuple

from .formula import INF, ParseError, load_wcnf
from .search import SolveResult, SolverConfig, solve

log = logging.getLogger(__name__)

WCNF_SUFFIXES = (".wcnf", ".cnf", ".dimacs")


@dataclass
class RunRecord:
    """One (config, instance) execution, as persisted to runs.jsonl."""

    instance: str
    label: str
    config: dict
    best_cost: Optional[int]
    time_to_best: Optional[float]
    trace: List[Tuple[int, float, int]]
    flips: int
    termination: str
    wall_time: float
    error: Optional[str] = None
    skipped: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        d = json.loads(line)
        d["trace"] = [tuple(row) for row in d["trace"]]
        return cls(**d)


def mse_score(bkc: int, found) -> float:
    """Per-instance score: 0 without a feasible solution, else
    (bkc + 1) / (found + 1), clipped to 1."""
    if found is None or found == INF:
        return 0.0
    if found < bkc:
        log.warning("found cost %s beats the reference %s; clipping score to 1", found, bkc)
        return 1.0
    return (bkc + 1) / (found + 1)


def compute_wins(costs: Dict[str, Dict[str, Optional[int]]]) -> Dict[str, int]:
    """Per-solver count of instances where it matched the best finite cost.

    Ties count for every tied solver; instances where no solver found a
    feasible solution award nothing.
    """
    wins: Dict[str, int] = {}
    for per_solver in costs.values():
        for label in per_solver:
            wins.setdefault(label, 0)
    for per_solver in costs.values():
        finite = [c for c in per_solver.values() if c is not None and c != INF]
        if not finite:
            continue
        best = min(finite)
        for label, c in per_solver.items():
            if c == best:
                wins[label] += 1
    return wins


def _run_one(job: Tuple[str, str, SolverConfig]) -> RunRecord:
    path, label, cfg = job
    t0 = perf_counter()
    try:
        formula = load_wcnf(path)
    except (ParseError, OSError, UnicodeDecodeError) as exc:
        return RunRecord(path, label, {}, None, None, [], 0, "error",
                         perf_counter() - t0, error=f"unreadable: {exc}", skipped=True)
    try:
        result: SolveResult = solve(formula, cfg)
    except Exception as exc:  # a crashed run scores as no-feasible
        return RunRecord(path, label, asdict(cfg), None, None, [], 0, "error",
                         perf_counter() - t0, error=f"crash: {exc}")
    feasible = result.feasible
    return RunRecord(
        instance=path,
        label=label,
        config=asdict(result.config),
        best_cost=int(result.best_cost) if feasible else None,
        time_to_best=result.trace[-1][1] if feasible else None,
        trace=list(result.trace),
        flips=result.flips,
        termination=result.termination,
        wall_time=perf_counter() - t0,
    )


def aggregate(records: Sequence[RunRecord], bkc: Optional[Dict[str, int]] = None) -> dict:
    """Reduce run records to the comparison report.

    The reference cost per instance comes from the bkc mapping when given
    (keyed by basename or full path), otherwise from the best cost found by
    any compared run. Mean time-to-best averages only runs that found a
    feasible solution.
    """
    skipped = sorted({r.instance: r.error for r in records if r.skipped}.items())
    records = sorted(
        (r for r in records if not r.skipped),
        key=lambda r: (r.label, r.instance),
    )

    labels: List[str] = []
    costs: Dict[str, Dict[str, Optional[int]]] = {}
    for r in records:
        if r.label not in labels:
            labels.append(r.label)
        costs.setdefault(r.instance, {})[r.label] = r.best_cost

    instances = sorted(costs)
    refs: Dict[str, Optional[int]] = {}
    for inst in instances:
        ref = None
        if bkc is not None:
            ref = bkc.get(os.path.basename(inst), bkc.get(inst))
        if ref is None:
            finite = [c for c in costs[inst].values() if c is not None]
            ref = min(finite) if finite else None
        refs[inst] = ref

    wins = compute_wins(costs)
    solvers = {}
    for label in labels:
        rows = [r for r in records if r.label == label]
        scores = []
        for inst in instances:
            ref = refs[inst]
            found = costs[inst].get(label)
            scores.append(mse_score(ref, found) if ref is not None else 0.0)
        times = [r.time_to_best for r in rows if r.time_to_best is not None]
        solvers[label] = {
            "wins": wins.get(label, 0),
            "score": sum(scores) / len(scores) if scores else 0.0,
            "mean_time_to_best": sum(times) / len(times) if times else None,
            "feasible": sum(1 for r in rows if r.best_cost is not None),
        }
    return {
        "num_instances": len(instances),
        "instances": instances,
        "refs": {k: refs[k] for k in instances},
        "solvers": solvers,
        "skipped": [list(s) for s in skipped],
    }


def format_report(report: dict) -> str:
    lines = [f"#inst: {report['num_instances']}"]
    header = f"{'solver':<24} {'#win':>6} {'time':>10} {'#score':>8} {'#feas':>6}"
    lines.append(header)
    lines.append("-" * len(header))
    for label, row in report["solvers"].items():
        t = f"{row['mean_time_to_best']:.2f}" if row["mean_time_to_best"] is not None else "-"
        lines.append(
            f"{label:<24} {row['wins']:>6} {t:>10} {row['score']:>8.4f} {row['feasible']:>6}"
        )
    if report["skipped"]:
        lines.append(f"skipped: {len(report['skipped'])} unreadable instance(s)")
    return "\n".join(lines)


def discover_instances(directory) -> List[str]:
    root = Path(directory)
    return sorted(
        str(p) for p in root.iterdir()
        if p.is_file() and p.suffix.lower() in WCNF_SUFFIXES
    )


def run_benchmark(
    directory,
    configs: Sequence[Tuple[str, SolverConfig]],
    time_limit: Optional[float] = None,
    parallelism: int = 1,
    bkc: Optional[Dict[str, int]] = None,
    out_dir=None,
) -> dict:
    """Execute every (config, instance) pair once and build the report.

    Each config is run under the given wall-clock limit unless it already
    carries its own cutoff. Records land in out_dir/runs.jsonl and the
    report in out_dir/report.json when out_dir is set.
    """
    instances = discover_instances(directory)
    jobs = []
    for label, cfg in configs:
        for path in instances:
            job_cfg = cfg
            if time_limit is not None and cfg.cutoff_seconds is None and cfg.max_flips is None:
                from dataclasses import replace
                job_cfg = replace(cfg, cutoff_seconds=time_limit)
            jobs.append((path, label, job_cfg))

    if parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            records = list(pool.map(_run_one, jobs))
    else:
        records = [_run_one(job) for job in jobs]

    report = aggregate(records, bkc=bkc)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "runs.jsonl", "w") as fh:
            for r in records:
                fh.write(r.to_json() + "\n")
        with open(out / "report.json", "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
    return report


def load_records(path) -> List[RunRecord]:
    with open(path) as fh:
        return [RunRecord.from_json(line) for line in fh if line.strip()]
