"""Exact WPMS optimum by exhaustive enumeration, for small instances only.

Assignments are enumerated as the integers 0..2^n-1 (bit v-1 holds the
value of variable v) and evaluated in vectorized chunks: a clause with
positive-literal mask P and negative-literal mask N is falsified by
assignment a iff (a & P) == 0 and (a & N) == N.
"""
from __future__ import annotations

from typing import List, Tuple

import numpy as np

from .formula import INF, Formula

MAX_ORACLE_VARS = 24
_CHUNK = 1 << 20


class TooManyVariables(ValueError):
    pass


def _masks(clauses) -> List[Tuple[np.uint64, np.uint64]]:
    out = []
    for lits in clauses:
        p = 0
        q = 0
        for lit in lits:
            if lit > 0:
                p |= 1 << (lit - 1)
            else:
                q |= 1 << (-lit - 1)
        out.append((np.uint64(p), np.uint64(q)))
    return out


def brute_force_opt(f: Formula):
    """Minimum cost over all assignments, with one minimizing witness.

    Returns (cost, values) where values is a 0/1 list indexed by variable
    (slot 0 unused), or (inf, None) when no feasible assignment exists.
    The witness is deterministic: the feasible minimizer with the smallest
    assignment index.
    """
    n = f.num_vars
    if n > MAX_ORACLE_VARS:
        raise TooManyVariables(f"{n} variables exceed the enumeration cap of {MAX_ORACLE_VARS}")
    if f.has_empty_hard:
        return INF, None

    hard_masks = _masks(f.hard)
    soft_masks = _masks(f.soft)
    weights = [np.uint64(w) for w in f.soft_weights]
    sentinel = np.iinfo(np.uint64).max
    zero = np.uint64(0)

    best_cost = None
    best_index = None
    total = 1 << n
    for start in range(0, total, _CHUNK):
        a = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        feasible = np.ones(len(a), dtype=bool)
        for p, q in hard_masks:
            feasible &= ~(((a & p) == zero) & ((a & q) == q))
        if not feasible.any():
            continue
        objs = np.full(len(a), f.soft_base, dtype=np.uint64)
        for (p, q), w in zip(soft_masks, weights):
            objs += (((a & p) == zero) & ((a & q) == q)) * w
        objs[~feasible] = sentinel
        i = int(np.argmin(objs))
        c = int(objs[i])
        if best_cost is None or c < best_cost:
            best_cost = c
            best_index = start + i

    if best_cost is None:
        return INF, None
    values = [0] * (n + 1)
    for v in range(1, n + 1):
        values[v] = (best_index >> (v - 1)) & 1
    return best_cost, values
