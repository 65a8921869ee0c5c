"""Incremental search state: per-flip maintenance of scores and falsified sets.

All derived quantities (satisfied-literal counts, falsified-clause sets,
objective value, per-variable score ingredients) are updated in time
proportional to the flipped variable's occurrence lists. The from-scratch
rebuild below serves as the independent correctness oracle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Optional

from .formula import INF, Assignment, Formula

# Positive-score threshold; absorbs float noise introduced by weight decay.
EPS = 1e-9


@dataclass
class SpbConstraint:
    """Soft-conflict pseudo-Boolean constraint: obj(A) < bound, with weight.

    The bound is the cost of the best solution found so far (inf before the
    first feasible one); the weight scales the soft part of every variable
    score.
    """

    weight: float = 1.0
    bound: float = INF


class IndexSet:
    """Set of small non-negative ints with O(1) add/discard and list access."""

    __slots__ = ("members", "pos")

    def __init__(self, capacity: int, members: Iterable[int] = ()):
        self.members: List[int] = []
        self.pos: List[int] = [-1] * capacity
        for x in members:
            self.add(x)

    def add(self, x: int) -> None:
        if self.pos[x] < 0:
            self.pos[x] = len(self.members)
            self.members.append(x)

    def discard(self, x: int) -> None:
        i = self.pos[x]
        if i >= 0:
            last = self.members[-1]
            self.members[i] = last
            self.pos[last] = i
            self.members.pop()
            self.pos[x] = -1

    def __contains__(self, x: int) -> bool:
        return self.pos[x] >= 0

    def __len__(self) -> int:
        return len(self.members)

    def as_set(self) -> set:
        return set(self.members)


class ScoreView(NamedTuple):
    variable: int
    score: float


class SearchState:
    """Mutable solver state over one shared immutable Formula."""

    __slots__ = (
        "formula",
        "assignment",
        "values",
        "flip_stamp",
        "step",
        "hard_weight",
        "max_hard_weight",
        "spb",
        "current_obj",
        "sat_count_hard",
        "sat_var_hard",
        "sat_count_soft",
        "sat_var_soft",
        "falsified_hard",
        "falsified_soft",
        "hscore",
        "softdelta",
        "goodvars",
        "pos_softdelta",
    )

    def __init__(self, formula: Formula, assignment: Assignment,
                 hard_weights: Optional[List[float]] = None,
                 spb: Optional[SpbConstraint] = None,
                 step: int = 1):
        if len(assignment.values) != formula.num_vars + 1:
            raise ValueError("assignment length does not match variable count")
        self.formula = formula
        self.assignment = assignment
        self.values = assignment.values
        self.flip_stamp = assignment.flip_stamp
        self.step = step
        self.hard_weight = list(hard_weights) if hard_weights is not None else [1.0] * len(formula.hard)
        self.max_hard_weight = max(self.hard_weight, default=1.0)
        self.spb = spb if spb is not None else SpbConstraint()
        self._build()

    def _build(self) -> None:
        f = self.formula
        n = f.num_vars
        values = self.values
        self.sat_count_hard = [0] * len(f.hard)
        self.sat_var_hard = [0] * len(f.hard)
        self.sat_count_soft = [0] * len(f.soft)
        self.sat_var_soft = [0] * len(f.soft)
        self.falsified_hard = IndexSet(len(f.hard))
        self.falsified_soft = IndexSet(len(f.soft))
        self.hscore = [0.0] * (n + 1)
        self.softdelta = [0] * (n + 1)
        obj = f.soft_base

        for cid, lits in enumerate(f.hard):
            cnt = 0
            sat_v = 0
            for lit in lits:
                if values[lit] if lit > 0 else not values[-lit]:
                    cnt += 1
                    sat_v = abs(lit)
            self.sat_count_hard[cid] = cnt
            w = self.hard_weight[cid]
            if cnt == 0:
                self.falsified_hard.add(cid)
                for v in f.hard_vars[cid]:
                    self.hscore[v] += w
            elif cnt == 1:
                self.sat_var_hard[cid] = sat_v
                self.hscore[sat_v] -= w

        for cid, lits in enumerate(f.soft):
            cnt = 0
            sat_v = 0
            for lit in lits:
                if values[lit] if lit > 0 else not values[-lit]:
                    cnt += 1
                    sat_v = abs(lit)
            self.sat_count_soft[cid] = cnt
            w = f.soft_weights[cid]
            if cnt == 0:
                self.falsified_soft.add(cid)
                obj += w
                for v in f.soft_vars[cid]:
                    self.softdelta[v] += w
            elif cnt == 1:
                self.sat_var_soft[cid] = sat_v
                self.softdelta[sat_v] -= w

        self.current_obj = obj
        self.pos_softdelta = IndexSet(n + 1)
        for v in range(1, n + 1):
            if self.softdelta[v] > 0:
                self.pos_softdelta.add(v)
        self.goodvars = IndexSet(n + 1)
        w_spb = self.spb.weight
        for v in range(1, n + 1):
            if self.hscore[v] + w_spb * self.softdelta[v] > EPS:
                self.goodvars.add(v)


def hscore(state: SearchState, v: int) -> float:
    """Drop in total dynamic weight of falsified hard clauses if v is flipped."""
    return state.hscore[v]


def spbscore(state: SearchState, v: int) -> float:
    """SPB weight times the objective decrease caused by flipping v."""
    return state.spb.weight * state.softdelta[v]


def score(state: SearchState, v: int) -> float:
    return state.hscore[v] + state.spb.weight * state.softdelta[v]


def score_view(state: SearchState, v: int) -> ScoreView:
    return ScoreView(v, score(state, v))


def refresh_candidacy(state: SearchState, variables: Iterable[int]) -> None:
    """Re-test goodvars/pos_softdelta membership for the given variables."""
    hs = state.hscore
    sd = state.softdelta
    w = state.spb.weight
    gv = state.goodvars
    psd = state.pos_softdelta
    for u in variables:
        if hs[u] + w * sd[u] > EPS:
            gv.add(u)
        else:
            gv.discard(u)
        if sd[u] > 0:
            psd.add(u)
        else:
            psd.discard(u)


def flip(state: SearchState, v: int) -> None:
    """Flip one variable and update every derived field incrementally."""
    f = state.formula
    values = state.values
    old = values[v]
    values[v] = 1 - old
    state.flip_stamp[v] = state.step
    state.step += 1

    hscore_ = state.hscore
    softdelta_ = state.softdelta
    hard_weight = state.hard_weight
    soft_weights = f.soft_weights
    sat_count_h = state.sat_count_hard
    sat_var_h = state.sat_var_hard
    sat_count_s = state.sat_count_soft
    sat_var_s = state.sat_var_soft
    fal_h = state.falsified_hard
    fal_s = state.falsified_soft
    hard_vars = f.hard_vars
    soft_vars = f.soft_vars
    hard_lits = f.hard
    soft_lits = f.soft
    obj = state.current_obj
    touched = []

    if old:
        true_h, false_h = f.occ_hard_neg[v], f.occ_hard_pos[v]
        true_s, false_s = f.occ_soft_neg[v], f.occ_soft_pos[v]
    else:
        true_h, false_h = f.occ_hard_pos[v], f.occ_hard_neg[v]
        true_s, false_s = f.occ_soft_pos[v], f.occ_soft_neg[v]

    for cid in true_h:
        n = sat_count_h[cid]
        if n == 0:
            w = hard_weight[cid]
            fal_h.discard(cid)
            for u in hard_vars[cid]:
                hscore_[u] -= w
                touched.append(u)
            hscore_[v] -= w
            sat_var_h[cid] = v
            sat_count_h[cid] = 1
        elif n == 1:
            x = sat_var_h[cid]
            hscore_[x] += hard_weight[cid]
            touched.append(x)
            sat_count_h[cid] = 2
        else:
            sat_count_h[cid] = n + 1

    for cid in false_h:
        n = sat_count_h[cid]
        if n == 1:
            w = hard_weight[cid]
            fal_h.add(cid)
            hscore_[v] += w
            for u in hard_vars[cid]:
                hscore_[u] += w
                touched.append(u)
            sat_count_h[cid] = 0
        elif n == 2:
            w = hard_weight[cid]
            x = 0
            for lit in hard_lits[cid]:
                if values[lit] if lit > 0 else not values[-lit]:
                    x = abs(lit)
                    break
            sat_var_h[cid] = x
            hscore_[x] -= w
            touched.append(x)
            sat_count_h[cid] = 1
        else:
            sat_count_h[cid] = n - 1

    for cid in true_s:
        n = sat_count_s[cid]
        if n == 0:
            w = soft_weights[cid]
            fal_s.discard(cid)
            obj -= w
            for u in soft_vars[cid]:
                softdelta_[u] -= w
                touched.append(u)
            softdelta_[v] -= w
            sat_var_s[cid] = v
            sat_count_s[cid] = 1
        elif n == 1:
            x = sat_var_s[cid]
            softdelta_[x] += soft_weights[cid]
            touched.append(x)
            sat_count_s[cid] = 2
        else:
            sat_count_s[cid] = n + 1

    for cid in false_s:
        n = sat_count_s[cid]
        if n == 1:
            w = soft_weights[cid]
            fal_s.add(cid)
            obj += w
            softdelta_[v] += w
            for u in soft_vars[cid]:
                softdelta_[u] += w
                touched.append(u)
            sat_count_s[cid] = 0
        elif n == 2:
            x = 0
            for lit in soft_lits[cid]:
                if values[lit] if lit > 0 else not values[-lit]:
                    x = abs(lit)
                    break
            sat_var_s[cid] = x
            softdelta_[x] -= soft_weights[cid]
            touched.append(x)
            sat_count_s[cid] = 1
        else:
            sat_count_s[cid] = n - 1

    state.current_obj = obj

    # Candidacy pass, inlined for speed; duplicates in touched are idempotent.
    w_spb = state.spb.weight
    gv = state.goodvars
    gv_pos = gv.pos
    gv_members = gv.members
    psd = state.pos_softdelta
    psd_pos = psd.pos
    psd_members = psd.members
    for u in touched:
        sd = softdelta_[u]
        if hscore_[u] + w_spb * sd > EPS:
            if gv_pos[u] < 0:
                gv_pos[u] = len(gv_members)
                gv_members.append(u)
        else:
            i = gv_pos[u]
            if i >= 0:
                last = gv_members[-1]
                gv_members[i] = last
                gv_pos[last] = i
                gv_members.pop()
                gv_pos[u] = -1
        if sd > 0:
            if psd_pos[u] < 0:
                psd_pos[u] = len(psd_members)
                psd_members.append(u)
        else:
            i = psd_pos[u]
            if i >= 0:
                last = psd_members[-1]
                psd_members[i] = last
                psd_pos[last] = i
                psd_members.pop()
                psd_pos[u] = -1


def recompute_from_scratch(formula: Formula, assignment: Assignment,
                           hard_weights: Optional[List[float]] = None,
                           spb: Optional[SpbConstraint] = None,
                           step: int = 1) -> SearchState:
    """Build a SearchState directly from definitions, then overwrite the score
    arrays by literal flip simulation.

    Serves as the test oracle for the incremental updates: hscore(v) and
    softdelta(v) are obtained by actually flipping v and re-evaluating the
    falsified hard weight total and obj from scratch.
    """
    spb = spb if spb is not None else SpbConstraint()
    state = SearchState(formula, assignment.copy(),
                        hard_weights=hard_weights, spb=spb, step=step)
    values = list(assignment.values)
    n = formula.num_vars

    def falsified_hard_weight(vals) -> float:
        total = 0.0
        for cid, lits in enumerate(formula.hard):
            if not formula.clause_satisfied(lits, vals):
                total += state.hard_weight[cid]
        return total

    base_hw = falsified_hard_weight(values)
    base_obj = formula.obj(values)
    hs = [0.0] * (n + 1)
    sd = [0] * (n + 1)
    for v in range(1, n + 1):
        values[v] = 1 - values[v]
        hs[v] = base_hw - falsified_hard_weight(values)
        sd[v] = base_obj - formula.obj(values)
        values[v] = 1 - values[v]
    state.hscore = hs
    state.softdelta = sd
    state.current_obj = base_obj
    state.pos_softdelta = IndexSet(n + 1, (v for v in range(1, n + 1) if sd[v] > 0))
    state.goodvars = IndexSet(
        n + 1, (v for v in range(1, n + 1) if hs[v] + spb.weight * sd[v] > EPS)
    )
    return state
