"""MaxSAT resolution and weakening over clause multisets, plus a replay checker."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .core import (
    Assignment,
    Clause,
    ClauseMultiset,
    Verdict,
    add_cube_to_table,
    packed_hits,
)

DEFAULT_EXHAUSTIVE_LIMIT = 24


class InvalidStepError(ValueError):
    def __init__(self, msg, step_index=None):
        if step_index is not None:
            msg = f"step {step_index}: {msg}"
        super().__init__(msg)
        self.step_index = step_index


@dataclass(frozen=True)
class MaxResStep:
    kind: str  # "resolve" or "weaken"
    occs: tuple
    var: int

    @classmethod
    def resolve(cls, i, j, pivot):
        return cls("resolve", (i, j), pivot)

    @classmethod
    def weaken(cls, i, var):
        return cls("weaken", (i,), var)

    def __str__(self):
        if self.kind == "resolve":
            return f"r {self.occs[0]} {self.occs[1]} {self.var}"
        return f"w {self.occs[0]} {self.var}"


@dataclass
class ProofLog:
    initial: ClauseMultiset
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)


@dataclass
class StepEffect:
    """What one step did to the multiset: occurrences removed and added."""

    step: Optional[MaxResStep]
    removed: list  # [(occ_id, Clause)]
    added: list  # [(occ_id, Clause)], resolvent first, then weakenings

    @property
    def added_clauses(self):
        return [c for _, c in self.added]

    @property
    def removed_clauses(self):
        return [c for _, c in self.removed]


def maxres_consequents(pos: Clause, neg: Clause, pivot: int) -> list:
    """Consequents of resolving ``pos`` (contains pivot) with ``neg`` (contains -pivot).

    Returned in emission order: the standard resolvent, the weakenings of
    ``pos`` over B minus A, then the weakenings of ``neg`` over A minus B.
    B minus A and A minus B are ordered by variable index.  Tautologies are
    dropped.
    """
    A = [l for l in pos.lits if l != pivot]
    B = [l for l in neg.lits if l != -pivot]
    A_set, B_set = set(A), set(B)
    b_only = [l for l in B if l not in A_set]
    a_only = [l for l in A if l not in B_set]
    out = [Clause(A + B)]
    for i, b in enumerate(b_only):
        out.append(Clause([pivot, *A, *b_only[:i], -b]))
    for i, a in enumerate(a_only):
        out.append(Clause([-pivot, *B, *a_only[:i], -a]))
    return [c for c in out if not c.is_tautology]


def _apply_resolve(F: ClauseMultiset, i, j, pivot, step_index=None) -> StepEffect:
    if pivot <= 0:
        raise InvalidStepError(f"pivot must be a positive variable, got {pivot}", step_index)
    if i == j:
        raise InvalidStepError(f"cannot resolve occurrence {i} with itself", step_index)
    try:
        ci, cj = F[i], F[j]
    except KeyError as e:
        raise InvalidStepError(str(e.args[0]), step_index) from None
    if pivot not in ci:
        raise InvalidStepError(f"occurrence {i} ({ci}) lacks +{pivot}", step_index)
    if -pivot not in cj:
        raise InvalidStepError(f"occurrence {j} ({cj}) lacks -{pivot}", step_index)
    removed = [(i, F._remove(i)), (j, F._remove(j))]
    added = [(F._add(c), c) for c in maxres_consequents(ci, cj, pivot)]
    return StepEffect(MaxResStep.resolve(i, j, pivot), removed, added)


def _apply_weaken(F: ClauseMultiset, i, var, step_index=None) -> StepEffect:
    if not 1 <= var <= F.num_vars:
        raise InvalidStepError(f"weakening variable {var} outside 1..{F.num_vars}", step_index)
    try:
        ci = F[i]
    except KeyError as e:
        raise InvalidStepError(str(e.args[0]), step_index) from None
    if var in ci.variables():
        raise InvalidStepError(f"occurrence {i} ({ci}) already mentions x{var}", step_index)
    removed = [(i, F._remove(i))]
    added = [(F._add(c), c) for c in (ci | [var], ci | [-var])]
    return StepEffect(MaxResStep.weaken(i, var), removed, added)


def apply_step(F: ClauseMultiset, step: MaxResStep, step_index=None) -> StepEffect:
    """Apply ``step`` to ``F`` in place."""
    if step.kind == "resolve":
        return _apply_resolve(F, *step.occs, step.var, step_index)
    if step.kind == "weaken":
        return _apply_weaken(F, step.occs[0], step.var, step_index)
    raise InvalidStepError(f"unknown step kind {step.kind!r}", step_index)


def maxres_step(F: ClauseMultiset, i: int, j: int, pivot: int) -> ClauseMultiset:
    G = F.copy()
    _apply_resolve(G, i, j, pivot)
    return G


def weaken_step(F: ClauseMultiset, i: int, var: int) -> ClauseMultiset:
    G = F.copy()
    _apply_weaken(G, i, var)
    return G


@dataclass
class ReplayResult:
    final: ClauseMultiset
    refuted: bool
    steps: int
    effects: list

    @property
    def size(self):
        return self.steps


def replay(log: ProofLog) -> ReplayResult:
    F = log.initial.copy()
    effects = [apply_step(F, s, k) for k, s in enumerate(log.steps)]
    return ReplayResult(F, F.has_empty_clause(), len(log.steps), effects)


class ProofBuilder:
    """Incrementally records a proof log while applying its steps."""

    def __init__(self, initial: ClauseMultiset):
        self.initial = initial
        self.state = initial.copy()
        self.steps = []
        self.effects = []

    def resolve(self, i, j, pivot) -> StepEffect:
        eff = _apply_resolve(self.state, i, j, pivot, len(self.steps))
        self.steps.append(eff.step)
        self.effects.append(eff)
        return eff

    def weaken(self, i, var) -> StepEffect:
        eff = _apply_weaken(self.state, i, var, len(self.steps))
        self.steps.append(eff.step)
        self.effects.append(eff)
        return eff

    def find(self, clause) -> int:
        """Occurrence id of some copy of ``clause`` (lowest id)."""
        clause = clause if isinstance(clause, Clause) else Clause(clause)
        for occ, c in self.state.occurrences():
            if c == clause:
                return occ
        raise KeyError(f"{clause} not in current multiset")

    def log(self) -> ProofLog:
        return ProofLog(self.initial, list(self.steps))


# --- viol invariant ----------------------------------------------------------

def _local_delta_witness(effect: StepEffect, limit: int):
    """Exhaustively compare removed vs added clauses on their own variables.

    viol changes by sum(added falsified) - sum(removed falsified), which only
    depends on the variables those clauses mention, so checking every
    assignment of that support is the same as checking all 2^n.
    Returns (ok, local_witness_dict) or None when the support exceeds limit.
    """
    support = sorted(set().union(*(c.variables() for c in effect.removed_clauses + effect.added_clauses)))
    k = len(support)
    if k > limit:
        return None
    rename = {v: i + 1 for i, v in enumerate(support)}
    table = np.zeros(1 << k, dtype=np.int64)
    for c, sign in [(c, 1) for c in effect.removed_clauses] + [(c, -1) for c in effect.added_clauses]:
        if c.is_tautology:
            continue
        cube = [-(rename[abs(l)]) if l > 0 else rename[abs(l)] for l in c.lits]
        add_cube_to_table(table, k, cube, sign)
    bad = np.flatnonzero(table)
    if bad.size == 0:
        return True, None
    bits = int(bad[0])
    local = {v: (bits >> (k - 1 - i)) & 1 for i, v in enumerate(support)}
    return False, local


def _full_witness(local: dict, num_vars: int) -> tuple:
    return tuple(local.get(v, 0) for v in range(1, num_vars + 1))


def check_viol_invariant(
    log: Union[ProofLog, list],
    mode: str = "exhaustive",
    samples: int = 10_000,
    seed: int = 0,
    limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    num_vars: Optional[int] = None,
) -> Verdict:
    """Check that every step leaves viol unchanged pointwise.

    ``log`` is a ProofLog (replayed here) or an explicit list of StepEffect
    records, which lets callers check tampered derivations.  Exhaustive mode
    is exact over all assignments; a step whose support exceeds ``limit``
    variables is checked by sampling instead and the verdict says so.
    """
    if isinstance(log, ProofLog):
        num_vars = log.initial.num_vars
        try:
            effects = replay(log).effects
        except InvalidStepError as e:
            return Verdict(False, mode, step=e.step_index, detail=str(e))
    else:
        effects = log
        if num_vars is None:
            num_vars = max(
                (c.max_var() for e in effects for c in e.removed_clauses + e.added_clauses), default=0
            )

    if mode == "exhaustive":
        fallback = []
        for k, eff in enumerate(effects):
            res = _local_delta_witness(eff, limit)
            if res is None:
                fallback.append(k)
                continue
            ok, local = res
            if not ok:
                return Verdict(False, mode, witness=_full_witness(local, num_vars), step=k,
                               detail="viol changed")
        if not fallback:
            return Verdict(True, mode)
        v = _sampled(effects, num_vars, samples, seed, only=fallback)
        v.mode = "exhaustive+sampled"
        v.extra["sampled_steps"] = fallback
        return v
    if mode == "sampled":
        return _sampled(effects, num_vars, samples, seed)
    raise ValueError(f"unknown mode {mode!r}")


def _random_bits(num_vars, samples, seed):
    rng = np.random.default_rng(seed)
    if num_vars > 64:
        raise ValueError("sampled checks support at most 64 variables")
    if num_vars == 0:
        return np.zeros(samples, dtype=np.uint64)
    return rng.integers(0, 1 << num_vars, size=samples, dtype=np.uint64, endpoint=False) \
        if num_vars < 64 else rng.integers(0, 2**64 - 1, size=samples, dtype=np.uint64)


def _sampled(effects, num_vars, samples, seed, only=None) -> Verdict:
    bits = _random_bits(num_vars, samples, seed)
    steps = range(len(effects)) if only is None else only
    for k in steps:
        eff = effects[k]
        delta = np.zeros(bits.shape, dtype=np.int64)
        for c in eff.removed_clauses:
            if not c.is_tautology:
                delta += packed_hits(bits, num_vars, [-l for l in c.lits])
        for c in eff.added_clauses:
            if not c.is_tautology:
                delta -= packed_hits(bits, num_vars, [-l for l in c.lits])
        bad = np.flatnonzero(delta)
        if bad.size:
            w = Assignment(int(bits[bad[0]]), num_vars).values()
            return Verdict(False, "sampled", witness=w, step=k, samples=samples, seed=seed,
                           detail="viol changed")
    return Verdict(True, "sampled", samples=samples, seed=seed)


def net_growth_bound(num_vars: int) -> int:
    """Largest net change in clause count one MaxRes step can cause."""
    return num_vars - 2


def random_steps(F: ClauseMultiset, count: int, rng, weaken_prob=0.3) -> ProofLog:
    """A random applicable log of at most ``count`` steps (for soundness sweeps)."""
    b = ProofBuilder(F)
    for _ in range(count):
        occs = list(b.state.occurrences())
        pairs = []
        for (i, ci), (j, cj) in itertools.permutations(occs, 2):
            for l in ci.lits:
                if l > 0 and -l in cj:
                    pairs.append((i, j, l))
        if pairs and rng.random() >= weaken_prob:
            b.resolve(*pairs[rng.integers(len(pairs))])
            continue
        options = [(i, v) for i, c in occs for v in range(1, F.num_vars + 1) if v not in c.variables()]
        if not options:
            if not pairs:
                break
            b.resolve(*pairs[rng.integers(len(pairs))])
            continue
        b.weaken(*options[rng.integers(len(options))])
    return b.log()
