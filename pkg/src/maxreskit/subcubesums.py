"""SubCubeSums certificates: a cube multiset G with viol_F == 1 + viol_G."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    Assignment,
    ClauseMultiset,
    Cube,
    CubeMultiset,
    RangeError,
    Verdict,
    add_cube_to_table,
    hits_at,
    viol_at,
    viol,
)
from .families import compose, compose_assignment_bits
from .maxres import DEFAULT_EXHAUSTIVE_LIMIT, _random_bits

MAX_TABLE_VARS = 30


class CertificateError(ValueError):
    pass


@dataclass
class ScsCertificate:
    formula: ClauseMultiset
    cubes: CubeMultiset

    def __post_init__(self):
        if self.formula.num_vars != self.cubes.num_vars:
            raise CertificateError(
                f"formula has {self.formula.num_vars} variables, cubes have {self.cubes.num_vars}"
            )

    @property
    def size(self):
        return self.cubes.size

    @property
    def width(self):
        return self.cubes.width

    @property
    def degree(self):
        """Degree in the algebraic reading: also counts the formula's width."""
        return max(self.cubes.width, self.formula.width)


@dataclass
class PseudoFunction:
    """An integer-valued function on {0,1}^n, stored as a dense table."""

    values: np.ndarray
    num_vars: int

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)
        if self.values.shape != (1 << self.num_vars,):
            raise ValueError(f"table length {self.values.shape} != 2^{self.num_vars}")

    def __call__(self, a) -> int:
        bits = a.bits if isinstance(a, Assignment) else int(a)
        return int(self.values[bits])

    def __sub__(self, other):
        if isinstance(other, PseudoFunction):
            return PseudoFunction(self.values - other.values, self.num_vars)
        return PseudoFunction(self.values - other, self.num_vars)

    def __add__(self, other):
        if isinstance(other, PseudoFunction):
            return PseudoFunction(self.values + other.values, self.num_vars)
        return PseudoFunction(self.values + other, self.num_vars)

    def __eq__(self, other):
        return (isinstance(other, PseudoFunction) and self.num_vars == other.num_vars
                and np.array_equal(self.values, other.values))

    def tolist(self):
        return [int(v) for v in self.values]


def _check_table_size(num_vars, limit=MAX_TABLE_VARS):
    if num_vars > limit:
        raise RangeError(f"dense table over {num_vars} variables exceeds limit {limit}")


def viol_table(F: ClauseMultiset, limit: int = MAX_TABLE_VARS) -> PseudoFunction:
    _check_table_size(F.num_vars, limit)
    table = np.zeros(1 << F.num_vars, dtype=np.int64)
    for c, k in F.counts().items():
        if not c.is_tautology:
            add_cube_to_table(table, F.num_vars, [-l for l in c.lits], k)
    return PseudoFunction(table, F.num_vars)


def hits_table(G: CubeMultiset, limit: int = MAX_TABLE_VARS) -> PseudoFunction:
    _check_table_size(G.num_vars, limit)
    table = np.zeros(1 << G.num_vars, dtype=np.int64)
    for q, k in G.items():
        add_cube_to_table(table, G.num_vars, q.lits, k)
    return PseudoFunction(table, G.num_vars)


def measures(G: CubeMultiset):
    """(size, width) of a cube multiset."""
    return G.size, G.width


def from_pointwise(d: PseudoFunction) -> CubeMultiset:
    """Point cubes with multiplicity d(a): the brute-force junta for d."""
    vals = np.asarray(d.values)
    if not np.issubdtype(vals.dtype, np.integer):
        frac = np.flatnonzero(vals != np.round(vals))
        if frac.size:
            w = Assignment(int(frac[0]), d.num_vars).values()
            raise CertificateError(f"non-integral value {vals[frac[0]]} at {w}")
    neg = np.flatnonzero(vals < 0)
    if neg.size:
        w = Assignment(int(neg[0]), d.num_vars).values()
        raise CertificateError(f"negative value {int(vals[neg[0]])} at {w}")
    counts = Counter()
    n = d.num_vars
    for bits in np.flatnonzero(vals):
        a = Assignment(int(bits), n)
        counts[Cube(v if a[v] else -v for v in range(1, n + 1))] = int(vals[bits])
    return CubeMultiset(counts, num_vars=n)


def pointwise_certificate(F: ClauseMultiset) -> ScsCertificate:
    """The brute-force certificate from (viol_F - 1); fails iff F is satisfiable."""
    return ScsCertificate(F, from_pointwise(viol_table(F) - 1))


def check_certificate(
    cert: ScsCertificate,
    mode: str = "exhaustive",
    samples: int = 10_000,
    seed: int = 0,
    limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> Verdict:
    F, G = cert.formula, cert.cubes
    if F.num_vars != G.num_vars:
        raise CertificateError("formula and cubes disagree on num_vars")
    n = F.num_vars
    if mode == "auto":
        mode = "exhaustive" if n <= limit else "sampled"
    if mode == "exhaustive":
        if n > limit:
            raise RangeError(f"exhaustive check over {n} variables exceeds limit {limit}")
        diff = viol_table(F, limit).values - 1 - hits_table(G, limit).values
        bad = np.flatnonzero(diff)
        if bad.size:
            w = Assignment(int(bad[0]), n).values()
            return Verdict(False, "exhaustive", witness=w, detail=_mismatch(cert, int(bad[0])))
        return Verdict(True, "exhaustive")
    if mode == "sampled":
        bits = _random_bits(n, samples, seed)
        chunk = 1 << 18
        for start in range(0, samples, chunk):
            part = bits[start:start + chunk]
            diff = viol_at(F, part) - 1 - hits_at(G, part)
            bad = np.flatnonzero(diff)
            if bad.size:
                b = int(part[bad[0]])
                return Verdict(False, "sampled", witness=Assignment(b, n).values(),
                               samples=samples, seed=seed, detail=_mismatch(cert, b))
        return Verdict(True, "sampled", samples=samples, seed=seed)
    raise ValueError(f"unknown mode {mode!r}")


def _mismatch(cert, bits) -> str:
    a = Assignment(bits, cert.formula.num_vars)
    from .core import cube_hits

    return f"viol_F={viol(cert.formula, a)} but 1+viol_G={1 + cube_hits(cert.cubes, a)}"


def compose_xor_check(F: ClauseMultiset, a1, a2, composed: Optional[ClauseMultiset] = None) -> Verdict:
    """viol_F(a1 xor a2) against viol of F∘XOR at the pair (a1, a2)."""
    n = F.num_vars
    composed = composed if composed is not None else compose(F, "xor")
    b1 = a1.bits if isinstance(a1, Assignment) else Assignment.from_values(a1).bits
    b2 = a2.bits if isinstance(a2, Assignment) else Assignment.from_values(a2).bits
    lhs = viol(F, Assignment(b1 ^ b2, n))
    rhs = viol(composed, Assignment(compose_assignment_bits(b1, b2, n), 2 * n))
    return Verdict(lhs == rhs, "pair", witness=None if lhs == rhs else
                   Assignment(b1, n).values() + Assignment(b2, n).values(),
                   extra={"lhs": lhs, "rhs": rhs})


def compose_xor_sweep(F: ClauseMultiset, max_vars: int = 10) -> Verdict:
    """All 4^n pairs at once through dense tables (n <= max_vars)."""
    n = F.num_vars
    if n > max_vars:
        raise RangeError(f"sweep over {n} variables exceeds {max_vars}")
    base = viol_table(F).values
    comp = viol_table(compose(F, "xor")).values
    idx = np.arange(1 << (2 * n), dtype=np.int64)
    a1 = np.zeros_like(idx)
    a2 = np.zeros_like(idx)
    for x in range(1, n + 1):
        shift = 2 * (n - x)
        a1 = (a1 << 1) | ((idx >> (shift + 1)) & 1)
        a2 = (a2 << 1) | ((idx >> shift) & 1)
    diff = comp - base[a1 ^ a2]
    bad = np.flatnonzero(diff)
    if bad.size:
        k = int(bad[0])
        w = Assignment(int(a1[k]), n).values() + Assignment(int(a2[k]), n).values()
        return Verdict(False, "exhaustive", witness=w, detail="commutation fails")
    return Verdict(True, "exhaustive", extra={"pairs": int(idx.size)})


def lift_xor(d: PseudoFunction) -> PseudoFunction:
    """(d ∘ xor)(a1, a2) = d(a1 xor a2) in the interleaved numbering."""
    n = d.num_vars
    idx = np.arange(1 << (2 * n), dtype=np.int64)
    a = np.zeros_like(idx)
    for x in range(1, n + 1):
        shift = 2 * (n - x)
        a = (a << 1) | (((idx >> (shift + 1)) ^ (idx >> shift)) & 1)
    return PseudoFunction(d.values[a], 2 * n)
