"""Initial assignment construction: unit-propagation decimation and the
uniform-random fallback."""
from __future__ import annotations

import random
from collections import deque

from .formula import Assignment, Formula


def random_init(f: Formula, rng: random.Random) -> Assignment:
    """Each variable independently uniform-random."""
    values = [0] * (f.num_vars + 1)
    for v in range(1, f.num_vars + 1):
        values[v] = 1 if rng.random() < 0.5 else 0
    return Assignment.from_values(values)


def decimation_init(f: Formula, rng: random.Random) -> Assignment:
    """Assign variables one at a time with unit-clause priority.

    Hard unit clauses are served first (in discovery order, so conflicting
    hard units resolve first-come), then a uniformly random soft unit, then
    a uniformly random unassigned variable with a random value. Clauses
    already satisfied drop out of consideration; falsified literals shrink
    the per-clause unassigned counters that detect new units.
    """
    n = f.num_vars
    values = [-1] * (n + 1)

    hard_unassigned = [len(lits) for lits in f.hard]
    soft_unassigned = [len(lits) for lits in f.soft]
    hard_sat = [False] * len(f.hard)
    soft_sat = [False] * len(f.soft)

    hard_units = deque(cid for cid, c in enumerate(f.hard) if len(c) == 1)
    soft_units = [cid for cid, c in enumerate(f.soft) if len(c) == 1]
    unassigned_pool = list(range(1, n + 1))
    remaining = n

    def assign(v: int, value: int) -> None:
        nonlocal remaining
        values[v] = value
        remaining -= 1
        if value:
            sat_h, fal_h = f.occ_hard_pos[v], f.occ_hard_neg[v]
            sat_s, fal_s = f.occ_soft_pos[v], f.occ_soft_neg[v]
        else:
            sat_h, fal_h = f.occ_hard_neg[v], f.occ_hard_pos[v]
            sat_s, fal_s = f.occ_soft_neg[v], f.occ_soft_pos[v]
        for cid in sat_h:
            hard_sat[cid] = True
        for cid in fal_h:
            hard_unassigned[cid] -= 1
            if hard_unassigned[cid] == 1 and not hard_sat[cid]:
                hard_units.append(cid)
        for cid in sat_s:
            soft_sat[cid] = True
        for cid in fal_s:
            soft_unassigned[cid] -= 1
            if soft_unassigned[cid] == 1 and not soft_sat[cid]:
                soft_units.append(cid)

    def unit_literal(lits) -> int:
        for lit in lits:
            if values[abs(lit)] < 0:
                return lit
        return 0

    while remaining:
        if hard_units:
            cid = hard_units.popleft()
            if hard_sat[cid] or hard_unassigned[cid] != 1:
                continue
            lit = unit_literal(f.hard[cid])
            assign(abs(lit), 1 if lit > 0 else 0)
            continue

        picked = 0
        while soft_units:
            i = rng.randrange(len(soft_units))
            cid = soft_units[i]
            if soft_sat[cid] or soft_unassigned[cid] != 1:
                soft_units[i] = soft_units[-1]
                soft_units.pop()
                continue
            lit = unit_literal(f.soft[cid])
            assign(abs(lit), 1 if lit > 0 else 0)
            picked = 1
            break
        if picked:
            continue

        while True:
            i = rng.randrange(len(unassigned_pool))
            v = unassigned_pool[i]
            unassigned_pool[i] = unassigned_pool[-1]
            unassigned_pool.pop()
            if values[v] < 0:
                assign(v, 1 if rng.random() < 0.5 else 0)
                break

    return Assignment.from_values([0] + values[1:])
