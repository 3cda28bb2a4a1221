"""Explicit upper-bound witnesses: SubCubeSums certificates and MaxRes logs."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import comb

import numpy as np

from .core import Clause, ClauseMultiset, Cube, CubeMultiset, falsifying_cube
from .families import (
    BipartiteDegreeGraph,
    compose,
    copy_var,
    pebhint,
    php,
    php_delta,
    pyramid,
    pyramid_layers,
)
from .maxres import ProofBuilder, ProofLog, replay
from .subcubesums import CertificateError, ScsCertificate, viol_table


# --- pigeonhole ----------------------------------------------------------------

def php_scs_proof(m: int) -> ScsCertificate:
    """Cubes falsifying the residual clauses certify PHP_m."""
    F = php(m)
    D = php_delta(m)
    return ScsCertificate(F, CubeMultiset(Counter(falsifying_cube(c) for c in D), num_vars=F.num_vars))


def php_identity_sides(A) -> tuple:
    """Both sides of the row/column counting identity for a 0/1 matrix
    with m+1 rows and m columns."""
    A = np.asarray(A, dtype=np.int64)
    rows, cols = A.sum(axis=1), A.sum(axis=0)
    lhs = int((rows == 0).sum()) + sum(comb(int(c), 2) for c in cols)
    rhs = (1 + int((cols == 0).sum()) + sum(int(r) - 1 for r in rows if r >= 2)
           + sum(comb(int(c) - 1, 2) for c in cols if c >= 3))
    return lhs, rhs


def php_matrix_bits(A) -> int:
    """Packed assignment of php(m) for matrix A (row-major variables)."""
    bits = 0
    for v in np.asarray(A, dtype=np.int64).ravel():
        bits = (bits << 1) | int(v)
    return bits


# --- subset cardinality --------------------------------------------------------

# multiplicities per vertex type: (side, degree) -> clause kind -> count
#   all_pos:    OR of x_e over E_w
#   all_neg:    OR of not x_e
#   one_pos:    x_e OR (OR of not x_f, f != e), one clause per e
#   one_neg:    not x_e OR (OR of x_f, f != e)
H_TABLE = {
    ("U", 4): {"all_pos": 2, "all_neg": 2, "one_pos": 1, "one_neg": 0},
    ("U", 5): {"all_pos": 7, "all_neg": 2, "one_pos": 1, "one_neg": 2},
    ("V", 4): {"all_pos": 2, "all_neg": 2, "one_pos": 0, "one_neg": 1},
    ("V", 5): {"all_pos": 2, "all_neg": 7, "one_pos": 2, "one_neg": 1},
}
EMPTY_MULT = {4: 2, 5: 3}


@dataclass
class VertexCubeTable:
    """Clause multisets attached to one vertex of a subset-cardinality graph.

    ``f`` is the vertex's own constraint, ``h`` goes into the certificate,
    ``f_aux`` (unit clauses) and ``h_aux`` (copies of the empty clause)
    only appear in the per-vertex balance viol(f)+viol(f_aux) = viol(h)+viol(h_aux).
    """

    side: str
    degree: int
    edge_vars: list
    f: list
    f_aux: list
    h: list
    h_aux: list


def vertex_table(side: str, edge_vars) -> VertexCubeTable:
    es = list(edge_vars)
    d = len(es)
    if (side, d) not in H_TABLE:
        raise CertificateError(f"no table row for a degree-{d} vertex on side {side}")
    sign = 1 if side == "U" else -1
    f = [Clause(sign * e for e in I) for I in itertools.combinations(es, d // 2 + 1)]
    f_aux = [Clause([-sign * e]) for e in es]
    row = H_TABLE[(side, d)]
    h = []
    h += [Clause(es)] * row["all_pos"]
    h += [Clause(-e for e in es)] * row["all_neg"]
    for e in es:
        h += [Clause([e, *(-f_ for f_ in es if f_ != e)])] * row["one_pos"]
        h += [Clause([-e, *(f_ for f_ in es if f_ != e)])] * row["one_neg"]
    h_aux = [Clause()] * EMPTY_MULT[d]
    return VertexCubeTable(side, d, es, f, f_aux, h, h_aux)


def vertex_tables(g: BipartiteDegreeGraph) -> list:
    out = []
    for u in range(g.n):
        out.append(vertex_table("U", [k + 1 for k in g.left_edges(u)]))
    for v in range(g.n):
        out.append(vertex_table("V", [k + 1 for k in g.right_edges(v)]))
    return out


def _local(clauses, edge_vars):
    ren = {e: i + 1 for i, e in enumerate(edge_vars)}
    return ClauseMultiset([Clause((1 if l > 0 else -1) * ren[abs(l)] for l in c.lits) for c in clauses],
                          num_vars=len(edge_vars))


def vertex_balance(t: VertexCubeTable) -> tuple:
    """(left, right) value tables over the vertex's own edge variables."""
    lhs = viol_table(_local(t.f + t.f_aux, t.edge_vars)).values
    rhs = viol_table(_local(t.h + t.h_aux, t.edge_vars)).values
    return lhs, rhs


def subsetcard_scs_proof(g: BipartiteDegreeGraph) -> ScsCertificate:
    from .families import subset_cardinality

    F = subset_cardinality(g)
    cubes = Counter()
    for t in vertex_tables(g):
        for c in t.h:
            cubes[falsifying_cube(c)] += 1
    return ScsCertificate(F, CubeMultiset(cubes, num_vars=F.num_vars))


# The explicit polynomial identities for single degree-4 and degree-5
# constraints sum x_i >= 2 resp. >= 3.  A monomial is (coef, {var: value}),
# i.e. coef times the indicator of a cube.

def _threshold_lhs(d, k, bits):
    x = [(bits >> (d - 1 - i)) & 1 for i in range(d)]
    falsified = sum(1 for I in itertools.combinations(range(d), d - k + 1) if all(x[i] == 0 for i in I))
    return falsified - (k - sum(x))


THRESHOLD4_RHS = (
    [(2, {1: 1, 2: 1, 3: 1, 4: 1})]
    + [(1, {i: (0 if i == j else 1) for i in range(1, 5)}) for j in (4, 3, 2, 1)]
    + [(2, {1: 0, 2: 0, 3: 0, 4: 0})]
)

THRESHOLD5_RHS = (
    [(2, {i: 1 for i in range(1, 6)})]
    + [(1, {i: (0 if i == j else 1) for i in range(1, 6)}) for j in (5, 4, 3, 2, 1)]
    + [(2, {i: (1 if i == j else 0) for i in range(1, 6)}) for j in (5, 4, 3, 2, 1)]
    + [(7, {i: 0 for i in range(1, 6)})]
)


def _monomial_sum(terms, d, bits):
    x = {i + 1: (bits >> (d - 1 - i)) & 1 for i in range(d)}
    return sum(c for c, cube in terms if all(x[v] == b for v, b in cube.items()))


def threshold_identity(d: int):
    """Yields (bits, lhs, rhs) for the degree-d identity at every point."""
    k, terms = {4: (2, THRESHOLD4_RHS), 5: (3, THRESHOLD5_RHS)}[d]
    for bits in range(1 << d):
        yield bits, _threshold_lhs(d, k, bits), _monomial_sum(terms, d, bits)


def table_latex() -> str:
    """The per-vertex multiplicity table as a LaTeX tabular."""
    kinds = [
        ("all_pos", r"$\bigvee_{e\in E_w} x_e$"),
        ("all_neg", r"$\bigvee_{e\in E_w} \overline{x_e}$"),
        ("one_pos", r"$x_e \vee \bigvee_{f\ne e}\overline{x_f}$"),
        ("one_neg", r"$\overline{x_e} \vee \bigvee_{f\ne e} x_f$"),
    ]
    cols = [("U", 4), ("U", 5), ("V", 4), ("V", 5)]
    lines = [r"\begin{tabular}{|l|l|l|l|l|}", r"\hline",
             "clause & " + " & ".join(f"${s}$, deg {d}" for s, d in cols) + r" \\ \hline"]
    lines.append(r"$\Box$ in $h'_w$ & " + " & ".join(str(EMPTY_MULT[d]) for _, d in cols) + r" \\ \hline")
    for key, tex in kinds:
        cells = [str(H_TABLE[c][key]) if H_TABLE[c][key] else "" for c in cols]
        lines.append(f"{tex} in $h_w$ & " + " & ".join(cells) + r" \\ \hline")
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"


# --- linear MaxRes refutation of the composed hinted pyramid ----------------------

def _vv(x, i):
    return copy_var(x + 1, i)


def pebhint_or_maxres_proof(h: int) -> ProofLog:
    """MaxRes refutation of compose(pebhint(pyramid(h)), OR), linear in |V|.

    Vertices are handled layer by layer, left to right.  For a vertex s
    with predecessors u, v (left, right) and siblings r, t (left, right)
    we hold u1u2s1s2 (or the clause u1u2 when r is missing) and v1v2,
    derive s1s2, and prepare v1v2t1t2 for t.
    """
    if h < 1:
        raise ValueError("height must be >= 1")
    g = pyramid(h)
    F = compose(pebhint(g), "or")
    b = ProofBuilder(F)

    def C(*lits):
        return Clause(lits)

    def pick(eff, clause):
        for occ, c in eff.added:
            if c == clause:
                return occ
        raise AssertionError(f"{clause} not produced by {eff.step}")

    have = {}  # vertex -> occurrence of v1 v2
    for s in g.sources():
        have[s] = b.find(C(_vv(s, 1), _vv(s, 2)))
    carry = {}  # vertex s -> occurrence of u1 u2 s1 s2 prepared by its left sibling
    layers = pyramid_layers(h)
    for layer in layers[1:]:
        for idx, s in enumerate(layer):
            u, v = g.preds[s]
            u1, u2, v1, v2 = _vv(u, 1), _vv(u, 2), _vv(v, 1), _vv(v, 2)
            s1, s2 = _vv(s, 1), _vv(s, 2)
            t = layer[idx + 1] if idx + 1 < len(layer) else None
            if idx == 0:
                start = have.pop(u)
            else:
                start = carry.pop(s)
            e1 = b.resolve(start, b.find(C(-u1, -v1, s1, s2)), u1)
            side = pick(e1, C(u1, u2, v1, s1, s2) if idx > 0 else C(u1, u2, v1))
            e2 = b.resolve(pick(e1, C(u2, -v1, s1, s2)), b.find(C(-u2, -v1, s1, s2)), u2)
            e3 = b.resolve(side, b.find(C(-u1, -v2, s1, s2)), u1)
            e4 = b.resolve(pick(e3, C(u2, v1, -v2, s1, s2)), b.find(C(-u2, -v2, s1, s2)), u2)
            e5 = b.resolve(have.pop(v), pick(e4, C(v1, -v2, s1, s2)), v2)
            e6 = b.resolve(pick(e5, C(v1, s1, s2)), pick(e2, C(-v1, s1, s2)), v1)
            have[s] = pick(e6, C(s1, s2))
            if t is not None:
                t1, t2 = _vv(t, 1), _vv(t, 2)
                e7 = b.resolve(b.find(C(s1, s2, t1, t2)), pick(e5, C(v1, v2, s1, -s2)), s2)
                e8 = b.resolve(pick(e7, C(v1, v2, s1, t1, t2)), pick(e5, C(v1, v2, -s1)), s1)
                carry[t] = pick(e8, C(v1, v2, t1, t2))
    z = g.sink
    z1, z2 = _vv(z, 1), _vv(z, 2)
    e = b.resolve(have.pop(z), b.find(C(-z1)), z1)
    b.resolve(pick(e, C(z2)), b.find(C(-z2)), z2)
    return b.log()


def pebhint_or_expected_steps(h: int) -> int:
    """8 steps per internal vertex, 2 fewer for the last vertex of each
    layer, plus the 2 final sink resolutions."""
    nv = (h + 1) * (h + 2) // 2
    return 8 * nv - 10 * h - 6


# --- MaxResW -> SubCubeSums ---------------------------------------------------

def scs_from_maxresw(log: ProofLog) -> ScsCertificate:
    """Falsifying cubes of the final multiset, minus one empty clause."""
    final = replay(log).final
    counts = final.counts()
    if counts[Clause()] < 1:
        raise CertificateError("final multiset has no empty clause")
    counts[Clause()] -= 1
    cubes = Counter()
    for c, k in counts.items():
        if k and not c.is_tautology:
            cubes[falsifying_cube(c)] += k
    return ScsCertificate(log.initial, CubeMultiset(cubes, num_vars=log.initial.num_vars))


def maxresw_scs_size_bound(m: int, n: int, s: int) -> int:
    """m initial clauses, s steps each adding at most n-2 net clauses,
    minus the empty clause that is removed."""
    return m + (n - 2) * s - 1
