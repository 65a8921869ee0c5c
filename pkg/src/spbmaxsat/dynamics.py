"""Weight-growth analysis for the adaptive update rule.

Models the soft-conflict weight under repeated updates w' = delta*(w + 1),
with the average falsified-hard weight growing by 1 per event, and reports
two per-step metrics: the relative increase R_inc = (w' - w)/w and the
importance increase I_inc = (w' - w)/(w + wh), both using pre-update
denominators. For delta > 1 both converge to delta - 1 from above; for
delta = 1 they decay to zero.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO, List

CSV_HEADER = ["step", "w_spb", "r_inc", "i_inc"]


@dataclass
class DynamicsRow:
    step: int
    w_spb: float
    r_inc: float
    i_inc: float


def weight_dynamics(delta: float, steps: int) -> List[DynamicsRow]:
    """Iterate the update rule `steps` times from w = 1, emitting one row
    per step with the post-update weight."""
    if delta < 1.0:
        raise ValueError("delta must be >= 1")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rows: List[DynamicsRow] = []
    w = 1.0
    wh = 1.0
    for n in range(1, steps + 1):
        new = delta * (w + 1.0)
        rows.append(DynamicsRow(n, new, (new - w) / w, (new - w) / (w + wh)))
        w = new
        wh += 1.0
    return rows


def write_csv(rows: List[DynamicsRow], out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([r.step, r.w_spb, r.r_inc, r.i_inc])
