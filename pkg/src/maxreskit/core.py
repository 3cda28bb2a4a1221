"""Clauses, cubes, assignments and the violation count.

Literals are DIMACS-style nonzero ints: ``v`` is the positive literal of
variable ``v`` and ``-v`` the negative one.  A cube is stored the same way:
the literal ``v`` fixes ``x_v = 1`` and ``-v`` fixes ``x_v = 0``, so the cube
falsifying a clause is just the clause with every literal negated.

Total assignments over ``n`` variables are packed into ints with ``x_1`` as
the most significant bit, so ``range(2**n)`` enumerates them in
lexicographic order of the bit tuples ``(x_1, ..., x_n)``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np


class RangeError(ValueError):
    pass


class TautologyError(ValueError):
    pass


def lit_key(lit: int):
    return (abs(lit), lit)


def _canonical(lits: Iterable[int]) -> tuple:
    lits = set(lits)
    if 0 in lits:
        raise ValueError("0 is not a literal")
    return tuple(sorted(lits, key=lit_key))


@dataclass(frozen=True, order=True)
class Clause:
    """A disjunction of literals, duplicate-free and sorted by variable."""

    lits: tuple = ()

    def __init__(self, lits: Iterable[int] = ()):
        object.__setattr__(self, "lits", _canonical(lits))

    @property
    def width(self) -> int:
        return len(self.lits)

    @property
    def is_tautology(self) -> bool:
        s = set(self.lits)
        return any(-l in s for l in s)

    @property
    def is_empty(self) -> bool:
        return not self.lits

    def variables(self) -> set:
        return {abs(l) for l in self.lits}

    def max_var(self) -> int:
        return max((abs(l) for l in self.lits), default=0)

    def __contains__(self, lit: int) -> bool:
        return lit in self.lits

    def __iter__(self):
        return iter(self.lits)

    def __len__(self):
        return len(self.lits)

    def __or__(self, other) -> "Clause":
        return Clause(self.lits + tuple(other))

    def __str__(self):
        if not self.lits:
            return "□"
        return " ∨ ".join(f"x{l}" if l > 0 else f"¬x{-l}" for l in self.lits)


@dataclass(frozen=True, order=True)
class Cube:
    """A partial assignment; ``lits`` holds +v for x_v=1 and -v for x_v=0."""

    lits: tuple = ()

    def __init__(self, lits: Iterable[int] = ()):
        lits = _canonical(lits)
        if len({abs(l) for l in lits}) != len(lits):
            raise ValueError(f"variable fixed twice in cube {lits}")
        object.__setattr__(self, "lits", lits)

    @classmethod
    def from_dict(cls, fixed: dict) -> "Cube":
        return cls(v if b else -v for v, b in fixed.items())

    def as_dict(self) -> dict:
        return {abs(l): int(l > 0) for l in self.lits}

    @property
    def width(self) -> int:
        return len(self.lits)

    def max_var(self) -> int:
        return max((abs(l) for l in self.lits), default=0)

    def mask_value(self, num_vars: int):
        """Bit mask of the fixed variables and their packed values."""
        mask = val = 0
        for l in self.lits:
            bit = 1 << (num_vars - abs(l))
            mask |= bit
            if l > 0:
                val |= bit
        return mask, val

    def contains(self, a: "Assignment") -> bool:
        return all(a[abs(l)] == (l > 0) for l in self.lits)

    def __str__(self):
        if not self.lits:
            return "⊤"
        return " ∧ ".join(f"x{l}" if l > 0 else f"¬x{-l}" for l in self.lits)


@dataclass(frozen=True)
class Assignment:
    bits: int
    num_vars: int

    def __post_init__(self):
        if self.num_vars < 0 or not 0 <= self.bits < (1 << self.num_vars):
            raise RangeError(f"bits {self.bits} out of range for {self.num_vars} variables")

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "Assignment":
        values = list(values)
        bits = 0
        for b in values:
            if b not in (0, 1, True, False):
                raise ValueError(f"non-Boolean value {b!r}")
            bits = (bits << 1) | int(b)
        return cls(bits, len(values))

    def __getitem__(self, var: int) -> int:
        if not 1 <= var <= self.num_vars:
            raise RangeError(f"variable {var} outside 1..{self.num_vars}")
        return (self.bits >> (self.num_vars - var)) & 1

    def values(self) -> tuple:
        return tuple(self[v] for v in range(1, self.num_vars + 1))

    def satisfies(self, lit: int) -> bool:
        return self[abs(lit)] == (lit > 0)

    def __iter__(self):
        return iter(self.values())


def all_assignments(num_vars: int) -> Iterator[Assignment]:
    for bits in range(1 << num_vars):
        yield Assignment(bits, num_vars)


class ClauseMultiset:
    """A multiset of clauses over variables 1..num_vars.

    Every occurrence carries a stable integer id.  Ids of the initial
    clauses are 1..m in the given order; later insertions get fresh ids,
    so removing an occurrence never renumbers the others.
    """

    __slots__ = ("num_vars", "_occ", "_next")

    def __init__(self, clauses: Iterable = (), num_vars: Optional[int] = None):
        cls_list = [c if isinstance(c, Clause) else Clause(c) for c in clauses]
        top = max((c.max_var() for c in cls_list), default=0)
        if num_vars is None:
            num_vars = top
        elif top > num_vars:
            raise RangeError(f"clause mentions variable {top} > num_vars={num_vars}")
        self.num_vars = num_vars
        self._occ = {i: c for i, c in enumerate(cls_list, start=1)}
        self._next = len(cls_list) + 1

    def copy(self) -> "ClauseMultiset":
        new = ClauseMultiset.__new__(ClauseMultiset)
        new.num_vars = self.num_vars
        new._occ = dict(self._occ)
        new._next = self._next
        return new

    # occurrence-level access, used by the proof engine
    def occurrences(self):
        return self._occ.items()

    def occurrence_ids(self):
        return list(self._occ)

    def __getitem__(self, occ: int) -> Clause:
        try:
            return self._occ[occ]
        except KeyError:
            raise KeyError(f"no clause occurrence with id {occ}") from None

    def _remove(self, occ: int) -> Clause:
        return self._occ.pop(occ)

    def _add(self, clause: Clause) -> int:
        if clause.max_var() > self.num_vars:
            raise RangeError(f"clause {clause} exceeds num_vars={self.num_vars}")
        occ = self._next
        self._next += 1
        self._occ[occ] = clause
        return occ

    # multiset view
    @property
    def clauses(self) -> list:
        return list(self._occ.values())

    def counts(self) -> Counter:
        return Counter(self._occ.values())

    def __len__(self):
        return len(self._occ)

    def __iter__(self):
        return iter(self._occ.values())

    def __contains__(self, clause) -> bool:
        clause = clause if isinstance(clause, Clause) else Clause(clause)
        return clause in self._occ.values()

    def count(self, clause) -> int:
        clause = clause if isinstance(clause, Clause) else Clause(clause)
        return sum(1 for c in self._occ.values() if c == clause)

    def __eq__(self, other):
        if not isinstance(other, ClauseMultiset):
            return NotImplemented
        return self.num_vars == other.num_vars and self.counts() == other.counts()

    def __hash__(self):
        return hash((self.num_vars, frozenset(self.counts().items())))

    @property
    def width(self) -> int:
        return max((c.width for c in self._occ.values()), default=0)

    def has_empty_clause(self) -> bool:
        return any(c.is_empty for c in self._occ.values())

    def __repr__(self):
        body = ", ".join(str(c) for c in self._occ.values())
        return f"ClauseMultiset(n={self.num_vars}, {{{body}}})"


class CubeMultiset:
    __slots__ = ("num_vars", "_counts")

    def __init__(self, cubes: Iterable = (), num_vars: Optional[int] = None):
        counts = Counter()
        if isinstance(cubes, dict):
            items = cubes.items()
        else:
            items = ((c, 1) for c in cubes)
        for c, k in items:
            c = c if isinstance(c, Cube) else Cube(c)
            if k < 0 or int(k) != k:
                raise ValueError(f"bad multiplicity {k} for cube {c}")
            if k:
                counts[c] += int(k)
        top = max((c.max_var() for c in counts), default=0)
        if num_vars is None:
            num_vars = top
        elif top > num_vars:
            raise RangeError(f"cube mentions variable {top} > num_vars={num_vars}")
        self.num_vars = num_vars
        self._counts = counts

    def counts(self) -> Counter:
        return Counter(self._counts)

    def items(self):
        return self._counts.items()

    def __iter__(self):
        for c, k in self._counts.items():
            for _ in range(k):
                yield c

    @property
    def size(self) -> int:
        return sum(self._counts.values())

    def __len__(self):
        return self.size

    @property
    def width(self) -> int:
        return max((c.width for c in self._counts), default=0)

    def __eq__(self, other):
        if not isinstance(other, CubeMultiset):
            return NotImplemented
        return self.num_vars == other.num_vars and self._counts == other._counts

    def __repr__(self):
        body = ", ".join(f"{k}×({c})" for c, k in sorted(self._counts.items()))
        return f"CubeMultiset(n={self.num_vars}, {{{body}}})"


@dataclass
class Verdict:
    """Outcome of a checker: pass/fail plus the data needed to reproduce it."""

    passed: bool
    mode: str = "exhaustive"
    witness: Optional[tuple] = None
    step: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None
    detail: str = ""
    extra: dict = field(default_factory=dict)

    def __bool__(self):
        return self.passed

    def miss_probability(self, eps: float) -> Optional[float]:
        """Chance that k uniform samples all miss a defect of density eps."""
        if self.samples is None:
            return None
        return (1.0 - eps) ** self.samples

    def to_dict(self) -> dict:
        d = {"pass": self.passed, "mode": self.mode}
        if self.witness is not None:
            d["witness"] = list(self.witness)
        if self.step is not None:
            d["step"] = self.step
        if self.samples is not None:
            d["samples"] = self.samples
        if self.seed is not None:
            d["seed"] = self.seed
        if self.detail:
            d["detail"] = self.detail
        d.update(self.extra)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


# --- semantics -------------------------------------------------------------

def _check_range(vars_: Iterable[int], a: Assignment):
    for v in vars_:
        if v > a.num_vars:
            raise RangeError(f"variable {v} outside assignment over {a.num_vars} variables")


def eval_clause(c: Clause, a: Assignment) -> bool:
    _check_range(c.variables(), a)
    return any(a.satisfies(l) for l in c.lits)


def viol(F: ClauseMultiset, a: Assignment) -> int:
    if a.num_vars != F.num_vars:
        raise RangeError(f"assignment over {a.num_vars} variables, formula has {F.num_vars}")
    return sum(1 for c in F if not eval_clause(c, a))


def falsifying_cube(c: Clause) -> Cube:
    if c.is_tautology:
        raise TautologyError(f"tautology {c} has no falsifying cube")
    return Cube(-l for l in c.lits)


def clause_of_cube(q: Cube) -> Clause:
    return Clause(-l for l in q.lits)


def cube_hits(G: CubeMultiset, a: Assignment) -> int:
    if a.num_vars != G.num_vars:
        raise RangeError(f"assignment over {a.num_vars} variables, cubes over {G.num_vars}")
    return sum(k for q, k in G.items() if q.contains(a))


def cubes_of(F: ClauseMultiset) -> CubeMultiset:
    """Falsifying cubes of a tautology-free multiset, multiplicities kept."""
    counts = Counter()
    for c in F:
        counts[falsifying_cube(c)] += 1
    return CubeMultiset(counts, num_vars=F.num_vars)


def restrict(F: ClauseMultiset, rho: Cube) -> ClauseMultiset:
    """Apply a partial assignment; variable numbering is left unchanged."""
    fixed = rho.as_dict()
    out = []
    for c in F:
        if any(abs(l) in fixed and fixed[abs(l)] == (l > 0) for l in c.lits):
            continue
        out.append(Clause(l for l in c.lits if abs(l) not in fixed))
    return ClauseMultiset(out, num_vars=F.num_vars)


# --- dense tables ----------------------------------------------------------

def add_cube_to_table(table: np.ndarray, num_vars: int, lits, k: int = 1):
    """Add k to every entry of a flat 2^n table lying in the cube ``lits``."""
    if num_vars == 0:
        table[0] += k
        return
    view = table.reshape((2,) * num_vars)
    idx = [slice(None)] * num_vars
    for l in lits:
        idx[abs(l) - 1] = 1 if l > 0 else 0
    view[tuple(idx)] += k


def packed_hits(bits: np.ndarray, num_vars: int, lits) -> np.ndarray:
    """Boolean array: which packed assignments lie in the cube ``lits``."""
    mask = val = 0
    for l in lits:
        bit = 1 << (num_vars - abs(l))
        mask |= bit
        if l > 0:
            val |= bit
    return (bits & np.uint64(mask)) == np.uint64(val)


def viol_at(F: ClauseMultiset, bits: np.ndarray) -> np.ndarray:
    """viol_F on an array of packed assignments (n <= 64)."""
    bits = np.asarray(bits, dtype=np.uint64)
    out = np.zeros(bits.shape, dtype=np.int64)
    for c, k in F.counts().items():
        if c.is_tautology:
            continue
        out += k * packed_hits(bits, F.num_vars, [-l for l in c.lits])
    return out


def hits_at(G: CubeMultiset, bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint64)
    out = np.zeros(bits.shape, dtype=np.int64)
    for q, k in G.items():
        out += k * packed_hits(bits, G.num_vars, q.lits)
    return out


def witness_bits(bits: int, num_vars: int) -> tuple:
    return Assignment(int(bits), num_vars).values()
