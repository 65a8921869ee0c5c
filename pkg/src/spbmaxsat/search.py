"""Main local search loop: greedy BMS flips, weighting at local optima,
best-solution tracking, and soft-conflict bound updates."""
from __future__ import annotations

import random
from dataclasses import dataclass, replace
from time import perf_counter
from typing import Callable, List, Optional, Tuple

from .formula import INF, Formula
from .initialization import decimation_init, random_init
from .state import SearchState, flip
from .weighting import (
    MODE_SPB,
    WeightingConfig,
    spb_weighting,
    update_spb_bound,
)

# Tuned presets: (k, h_inc, delta). "pms" applies when every soft weight is 1.
PRESETS = {
    "pms": (53, 1.0, 1.00072),
    "wpms": (97, 28.0, 1.001),
}

TERM_TIME = "time"
TERM_FLIPS = "flips"
TERM_OPTIMUM = "optimum"
TERM_INFEASIBLE = "infeasible"


class ConfigError(ValueError):
    pass


@dataclass
class SolverConfig:
    """Solver parameters; None fields are filled in from the preset.

    preset "auto" resolves to "pms" when every soft weight equals 1 and to
    "wpms" otherwise.
    """

    k: Optional[int] = None
    h_inc: Optional[float] = None
    delta: Optional[float] = None
    mode: str = MODE_SPB
    decay_threshold: float = 1e7
    decay_factor: float = 0.5
    cutoff_seconds: Optional[float] = None
    max_flips: Optional[int] = None
    seed: int = 1
    init: str = "decimation"
    preset: str = "auto"

    def resolve(self, formula: Formula) -> "SolverConfig":
        preset = self.preset
        if preset == "auto":
            preset = "pms" if formula.is_pms else "wpms"
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}")
        pk, ph, pd = PRESETS[preset]
        cfg = replace(
            self,
            k=self.k if self.k is not None else pk,
            h_inc=self.h_inc if self.h_inc is not None else ph,
            delta=self.delta if self.delta is not None else pd,
            preset=preset,
        )
        if cfg.cutoff_seconds is None and cfg.max_flips is None:
            raise ConfigError("set at least one of cutoff_seconds / max_flips")
        if cfg.k < 1:
            raise ConfigError("k must be >= 1")
        if cfg.init not in ("decimation", "random"):
            raise ConfigError(f"unknown init mode {cfg.init!r}")
        cfg.weighting().validate()
        return cfg

    def weighting(self) -> WeightingConfig:
        return WeightingConfig(
            h_inc=self.h_inc,
            delta=self.delta,
            mode=self.mode,
            decay_threshold=self.decay_threshold,
            decay_factor=self.decay_factor,
        )


@dataclass
class SolveResult:
    """Outcome of one solver run.

    trace holds one (flip step, wall seconds, cost) row per strict
    improvement; best_cost is inf and best_assignment None when no feasible
    solution was found.
    """

    best_assignment: Optional[List[int]]
    best_cost: float
    trace: List[Tuple[int, float, int]]
    flips: int
    termination: str
    config: SolverConfig

    @property
    def feasible(self) -> bool:
        return self.best_assignment is not None

    def bitstring(self) -> str:
        assert self.best_assignment is not None
        return "".join(str(b) for b in self.best_assignment[1:])


def bms_pick(state: SearchState, k: int, rng: random.Random) -> int:
    """Best of k positive-score candidates sampled with replacement.

    Ties break towards the older flip stamp, then the lower variable id.
    """
    members = state.goodvars.members
    m = len(members)
    assert m > 0, "bms_pick requires a non-empty positive-score set"
    if m == 1:
        return members[0]
    hs = state.hscore
    sd = state.softdelta
    w = state.spb.weight
    stamp = state.flip_stamp
    rnd = rng.random
    best_v = members[int(rnd() * m)]
    best_s = hs[best_v] + w * sd[best_v]
    for _ in range(k - 1):
        u = members[int(rnd() * m)]
        if u == best_v:
            continue
        s = hs[u] + w * sd[u]
        if s > best_s or (s == best_s and (stamp[u], u) < (stamp[best_v], best_v)):
            best_v = u
            best_s = s
    return best_v


def pick_from_falsified(state: SearchState, rng: random.Random) -> Optional[int]:
    """Highest-score variable of a random falsified clause, hard first.

    Returns None when nothing is falsified, i.e. the current assignment
    satisfies every clause and is therefore optimal.
    """
    members = state.falsified_hard.members
    if members:
        cid = members[int(rng.random() * len(members))]
        cvars = state.formula.hard_vars[cid]
    else:
        members = state.falsified_soft.members
        if not members:
            return None
        cid = members[int(rng.random() * len(members))]
        cvars = state.formula.soft_vars[cid]
    hs = state.hscore
    sd = state.softdelta
    w = state.spb.weight
    stamp = state.flip_stamp
    best_v = cvars[0]
    best_s = hs[best_v] + w * sd[best_v]
    for u in cvars[1:]:
        s = hs[u] + w * sd[u]
        if s > best_s or (s == best_s and (stamp[u], u) < (stamp[best_v], best_v)):
            best_v = u
            best_s = s
    return best_v


def solve(
    formula: Formula,
    config: Optional[SolverConfig] = None,
    on_improvement: Optional[Callable[[int], None]] = None,
    instrument: Optional[Callable[[SearchState, int], None]] = None,
) -> SolveResult:
    """Run the local search until the flip or time budget is exhausted.

    Every strict improvement triggers on_improvement(cost) immediately;
    instrument, when set, is called after every flip (it exists for tests
    and costs one branch per iteration otherwise).
    """
    cfg = (config or SolverConfig()).resolve(formula)
    rng = random.Random(cfg.seed)
    t0 = perf_counter()

    if formula.has_empty_hard:
        return SolveResult(None, INF, [], 0, TERM_INFEASIBLE, cfg)

    assignment = decimation_init(formula, rng) if cfg.init == "decimation" \
        else random_init(formula, rng)
    state = SearchState(formula, assignment)
    wcfg = cfg.weighting()

    best_cost = INF
    best_values: Optional[List[int]] = None
    trace: List[Tuple[int, float, int]] = []

    def record(step: int, cost: int) -> None:
        nonlocal best_cost, best_values
        best_cost = cost
        best_values = list(state.values)
        trace.append((step, perf_counter() - t0, cost))
        update_spb_bound(state.spb, cost)
        if on_improvement is not None:
            on_improvement(cost)

    if not state.falsified_hard.members:
        record(0, state.current_obj)
        if best_cost == 0:
            return SolveResult(best_values, 0, trace, 0, TERM_OPTIMUM, cfg)

    max_flips = cfg.max_flips
    cutoff = cfg.cutoff_seconds
    k = cfg.k
    goodvars = state.goodvars.members
    falsified_hard = state.falsified_hard.members
    flips = 0
    termination = TERM_FLIPS

    while True:
        if max_flips is not None and flips >= max_flips:
            termination = TERM_FLIPS
            break
        if cutoff is not None and (flips & 1023) == 0 \
                and perf_counter() - t0 >= cutoff:
            termination = TERM_TIME
            break

        if goodvars:
            v = bms_pick(state, k, rng)
        else:
            spb_weighting(state, wcfg)
            v = pick_from_falsified(state, rng)
            if v is None:
                # Nothing falsified at all: current solution is optimal.
                if state.current_obj < best_cost:
                    record(state.step - 1, state.current_obj)
                termination = TERM_OPTIMUM
                break

        flip(state, v)
        flips += 1
        if not falsified_hard and state.current_obj < best_cost:
            record(state.step - 1, state.current_obj)
            if best_cost == 0:
                if instrument is not None:
                    instrument(state, flips)
                termination = TERM_OPTIMUM
                break
        if instrument is not None:
            instrument(state, flips)

    return SolveResult(best_values, best_cost, trace, flips, termination, cfg)
