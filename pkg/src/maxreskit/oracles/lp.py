"""Exact-rational feasibility LPs for conical juntas and integral cube sums.

The system is: nonnegative coefficients c_q, one per cube q of width <= d,
with sum_q c_q [a in q] = target(a) for every assignment a.  Everything is
done over fractions.Fraction; no floats enter a verdict.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ..core import ClauseMultiset, Cube, CubeMultiset
from ..subcubesums import PseudoFunction, viol_table

MAX_LP_VARS = 12


class LPError(ValueError):
    pass


# --- Phase I simplex with Bland's rule -----------------------------------------

@dataclass
class Phase1Result:
    feasible: bool
    x: Optional[list] = None  # primal solution (Fractions) when feasible
    y: Optional[list] = None  # Farkas vector when infeasible: yA >= 0, yb < 0
    pivots: int = 0


def phase1(A, b) -> Phase1Result:
    """Decide {x >= 0 : Ax = b} exactly.

    A is a list of integer/Fraction rows, b a list.  Rows with b_i < 0 are
    negated internally; the returned Farkas vector refers to the original
    rows.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    sign = [1 if bi >= 0 else -1 for bi in b]
    T = []
    for i in range(m):
        row = [Fraction(sign[i] * a) for a in A[i]]
        row += [Fraction(int(k == i)) for k in range(m)]
        row.append(Fraction(sign[i] * b[i]))
        T.append(row)
    width = n + m
    # reduced costs of the phase-one objective (sum of artificials)
    r = [Fraction(0)] * (width + 1)
    for j in range(width + 1):
        if n <= j < width:
            continue
        r[j] = -sum((T[i][j] for i in range(m)), Fraction(0))
    basis = list(range(n, n + m))
    pivots = 0
    while True:
        enter = next((j for j in range(width) if r[j] < 0), None)
        if enter is None:
            break
        best, leave = None, None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # cannot happen in phase one (objective bounded below)
            raise LPError("unbounded phase-one problem")
        piv = T[leave][enter]
        prow = [v / piv for v in T[leave]]
        T[leave] = prow
        for i in range(m):
            if i != leave:
                f = T[i][enter]
                if f:
                    Ti = T[i]
                    for j in range(width + 1):
                        if prow[j]:
                            Ti[j] -= f * prow[j]
        f = r[enter]
        for j in range(width + 1):
            if prow[j]:
                r[j] -= f * prow[j]
        basis[leave] = enter
        pivots += 1
    value = -r[-1]
    if value == 0:
        x = [Fraction(0)] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = T[i][-1]
        return Phase1Result(True, x=x, pivots=pivots)
    # duals pi_i = 1 - reduced cost of artificial i; Farkas vector y = -pi
    y = [-(1 - r[n + i]) * sign[i] for i in range(m)]
    return Phase1Result(False, y=y, pivots=pivots)


# --- cube columns ---------------------------------------------------------------

def cubes_up_to(n: int, d: int):
    """All cubes of width <= d over n variables, by width then variables."""
    for w in range(min(d, n) + 1):
        for vs in itertools.combinations(range(1, n + 1), w):
            for vals in itertools.product((0, 1), repeat=w):
                yield Cube(v if b else -v for v, b in zip(vs, vals))


def _mask_value(q: Cube, n: int):
    mask = val = 0
    for l in q.lits:
        bit = 1 << (n - abs(l))
        mask |= bit
        if l > 0:
            val |= bit
    return mask, val


def _check_target(target: PseudoFunction):
    if target.num_vars > MAX_LP_VARS:
        raise LPError(f"LP oracle limited to {MAX_LP_VARS} variables")
    if (target.values < 0).any():
        bad = int(np.flatnonzero(target.values < 0)[0])
        raise LPError(f"negative target value {int(target.values[bad])} at assignment {bad}")


def _columns(target: PseudoFunction, d: int):
    """Cubes of width <= d that avoid every zero of the target, with the
    row indices (positive-target points) each one covers."""
    n = target.num_vars
    vals = target.values
    pts = np.arange(1 << n, dtype=np.int64)
    zeros = pts[vals == 0]
    rows = [int(a) for a in pts[vals > 0]]
    row_of = {a: i for i, a in enumerate(rows)}
    cols = []
    for q in cubes_up_to(n, d):
        mask, val = _mask_value(q, n)
        if zeros.size and np.any((zeros & mask) == val):
            continue
        covered = pts[(pts & mask) == val]
        cols.append((q, [row_of[int(a)] for a in covered]))
    return rows, cols


def _system(target, d):
    rows, cols = _columns(target, d)
    A = [[0] * len(cols) for _ in rows]
    for j, (_, covered) in enumerate(cols):
        for i in covered:
            A[i][j] = 1
    b = [int(target.values[a]) for a in rows]
    return rows, cols, A, b


@dataclass
class JuntaResult:
    feasible: bool
    degree: int
    witness: dict = field(default_factory=dict)  # Cube -> Fraction
    certificate: Optional[dict] = None  # assignment bits -> Fraction (Farkas vector)
    pivots: int = 0

    def to_dict(self):
        out = {"feasible": self.feasible, "degree": self.degree, "pivots": self.pivots}
        if self.feasible:
            out["witness"] = {str(q): str(c) for q, c in self.witness.items()}
        else:
            out["certificate"] = {str(a): str(v) for a, v in sorted(self.certificate.items())}
        return out


def conical_junta_feasible(target: PseudoFunction, d: int) -> JuntaResult:
    """Exact LP: is target a nonnegative combination of cubes of width <= d?

    When infeasible, ``certificate`` is a vector y over all assignments with
    sum_{a in q} y(a) >= 0 for every cube q of width <= d and
    sum_a y(a) target(a) < 0; see verify_farkas.
    """
    _check_target(target)
    n = target.num_vars
    if not (target.values > 0).any():
        return JuntaResult(True, d)
    rows, cols, A, b = _system(target, d)
    if not cols:
        # every cube hits a zero; y = -1 on a positive point, large on zeros
        res = Phase1Result(False, y=[Fraction(0)] * len(rows))
        res.y[0] = Fraction(-1)
    else:
        res = phase1(A, b)
    if res.feasible:
        witness = {cols[j][0]: v for j, v in enumerate(res.x) if v}
        return JuntaResult(True, d, witness=witness, pivots=res.pivots)
    y = {a: res.y[i] for i, a in enumerate(rows)}
    # zero-target points were dropped from the LP; give them a weight large
    # enough that every pruned cube gets a nonnegative sum
    vals = target.values
    zeros = [int(a) for a in np.flatnonzero(vals == 0)]
    K = Fraction(0)
    for q in cubes_up_to(n, d):
        mask, val = _mask_value(q, n)
        if any((z & mask) == val for z in zeros):
            s = sum((y[a] for a in rows if (a & mask) == val), Fraction(0))
            K = max(K, -s)
    for z in zeros:
        y[z] = K
    return JuntaResult(False, d, certificate=y, pivots=res.pivots)


def verify_farkas(target: PseudoFunction, d: int, y: dict) -> bool:
    """Independent check of an infeasibility certificate.

    Enumerates every cube of width <= d without any pruning and uses
    marginal sums of y over each variable subset.
    """
    n = target.num_vars
    arr = np.empty(1 << n, dtype=object)
    arr[:] = [Fraction(0)] * (1 << n)
    for a, v in y.items():
        arr[int(a)] = Fraction(v)
    if n:
        arr = arr.reshape((2,) * n)
    for w in range(min(d, n) + 1):
        for vs in itertools.combinations(range(n), w):
            other = tuple(k for k in range(n) if k not in vs)
            marg = arr.sum(axis=other) if other else arr
            for v in np.asarray(marg, dtype=object).ravel():
                if v < 0:
                    return False
    total = sum((Fraction(v) * int(target.values[int(a)]) for a, v in y.items()), Fraction(0))
    return total < 0


def verify_witness(target: PseudoFunction, d: int, witness: dict) -> bool:
    n = target.num_vars
    acc = np.empty(1 << n, dtype=object)
    acc[:] = [Fraction(0)] * (1 << n)
    pts = np.arange(1 << n, dtype=np.int64)
    for q, c in witness.items():
        if c < 0 or q.width > d:
            return False
        mask, val = _mask_value(q, n)
        for a in pts[(pts & mask) == val]:
            acc[a] += c
    return all(acc[a] == int(target.values[a]) for a in range(1 << n))


def junta_degree(target: PseudoFunction):
    """Least d with a conical junta; returns (d, result at d, result at d-1 or None)."""
    prev = None
    for d in range(target.num_vars + 1):
        res = conical_junta_feasible(target, d)
        if res.feasible:
            return d, res, prev
        prev = res
    raise LPError("target is not a conical junta even with point cubes (not integral?)")


# --- integral search -----------------------------------------------------------

@dataclass
class IntegralResult:
    status: str  # "feasible", "infeasible" or "budget"
    degree: int
    solution: Optional[dict] = None  # Cube -> int
    nodes: int = 0


def integral_feasible(target: PseudoFunction, d: int, node_limit: int = 2000,
                      time_limit: float = 30.0) -> IntegralResult:
    """Branch and bound on the LP relaxation for a nonnegative integer solution."""
    _check_target(target)
    if not (target.values > 0).any():
        return IntegralResult("feasible", d, solution={})
    rows, cols, A, b = _system(target, d)
    k = len(cols)
    if not k:
        return IntegralResult("infeasible", d)
    start = time.monotonic()
    stack = [([0] * k, [None] * k)]
    nodes = 0
    while stack:
        if nodes >= node_limit or time.monotonic() - start > time_limit:
            return IntegralResult("budget", d, nodes=nodes)
        lo, hi = stack.pop()
        nodes += 1
        if any(h is not None and h < l for l, h in zip(lo, hi)):
            continue
        # x = lo + x', upper bounds as extra rows x'_j + s_j = hi_j - lo_j
        bb = [b[i] - sum(A[i][j] * lo[j] for j in range(k) if lo[j]) for i in range(len(rows))]
        ub = [j for j in range(k) if hi[j] is not None]
        AA = [row + [0] * len(ub) for row in A]
        for t, j in enumerate(ub):
            r = [0] * (k + len(ub))
            r[j] = 1
            r[k + t] = 1
            AA.append(r)
            bb.append(hi[j] - lo[j])
        res = phase1(AA, bb)
        if not res.feasible:
            continue
        x = [lo[j] + res.x[j] for j in range(k)]
        frac = next((j for j in range(k) if x[j].denominator != 1), None)
        if frac is None:
            sol = {cols[j][0]: int(x[j]) for j in range(k) if x[j]}
            return IntegralResult("feasible", d, solution=sol, nodes=nodes)
        fl = math.floor(x[frac])
        up_lo = list(lo)
        up_lo[frac] = fl + 1
        down_hi = list(hi)
        down_hi[frac] = fl
        stack.append((up_lo, list(hi)))
        stack.append((list(lo), down_hi))
    return IntegralResult("infeasible", d, nodes=nodes)


@dataclass
class DegreeResult:
    junta_degree: int
    integral_degree: Optional[int]
    complete: bool  # False when the integral search ran out of budget
    dual_certificate: Optional[dict] = None  # Farkas vector at junta_degree - 1
    dual_verified: Optional[bool] = None
    junta_witness: dict = field(default_factory=dict)
    integral_witness: Optional[dict] = None

    def to_dict(self):
        return {
            "junta_degree": self.junta_degree,
            "integral_degree": self.integral_degree,
            "complete": self.complete,
            "dual_verified": self.dual_verified,
            "dual_certificate": None if self.dual_certificate is None else
            {str(a): str(v) for a, v in sorted(self.dual_certificate.items())},
        }


def scs_target(F: ClauseMultiset) -> PseudoFunction:
    return viol_table(F) - 1


def scs_min_degree(F: ClauseMultiset, node_limit: int = 2000, time_limit: float = 30.0,
                   integral_max_vars: int = 8) -> DegreeResult:
    """(junta degree, integral degree) of viol_F - 1.

    The junta degree comes with the Farkas vector refuting degree d-1,
    checked by verify_farkas.  The integral degree is searched upward from
    the junta degree; it is None (and complete=False) when the budget runs
    out or n exceeds integral_max_vars.
    """
    target = scs_target(F)
    _check_target(target)
    d, res, prev = junta_degree(target)
    out = DegreeResult(d, None, False, junta_witness=res.witness)
    if prev is not None:
        out.dual_certificate = prev.certificate
        out.dual_verified = verify_farkas(target, d - 1, prev.certificate)
    if F.num_vars > integral_max_vars:
        return out
    for e in range(d, F.num_vars + 1):
        ir = integral_feasible(target, e, node_limit, time_limit)
        if ir.status == "budget":
            return out
        if ir.status == "feasible":
            out.integral_degree = e
            out.integral_witness = ir.solution
            out.complete = True
            return out
    return out


def integral_witness_cubes(sol: dict, n: int) -> CubeMultiset:
    return CubeMultiset({q: k for q, k in sol.items()}, num_vars=n)
