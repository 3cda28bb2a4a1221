"""Generators for the formula families and their graph carriers.

Variable numbering conventions (stable, golden files depend on them):

* PHP: ``x_{i,j}`` (pigeon i in 1..m+1, hole j in 1..m) is variable
  ``(i-1)*m + j`` (row-major).
* Tseitin: edge ``k`` of the edge list is variable ``k+1``.
* DAG formulas: vertex ``v`` (0-based) is variable ``v+1``.
* Composition: original variable ``x`` becomes ``2x-1`` (copy 1) and ``2x``
  (copy 2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence

import numpy as np

from .core import Clause, ClauseMultiset


def php_var(i: int, j: int, m: int) -> int:
    return (i - 1) * m + j


def php(m: int) -> ClauseMultiset:
    """Pigeonhole principle: m+1 pigeons, m holes."""
    if m < 1:
        raise ValueError("php needs m >= 1")
    x = lambda i, j: php_var(i, j, m)  # noqa: E731
    clauses = [Clause(x(i, j) for j in range(1, m + 1)) for i in range(1, m + 2)]
    for j in range(1, m + 1):
        for i, i2 in itertools.combinations(range(1, m + 2), 2):
            clauses.append(Clause([-x(i, j), -x(i2, j)]))
    return ClauseMultiset(clauses, num_vars=m * (m + 1))


def php_delta(m: int) -> ClauseMultiset:
    """The residual clause set: every pigeon in at most one hole, every hole
    holding one or two pigeons, written with the gap-literal encoding."""
    if m < 1:
        raise ValueError("php_delta needs m >= 1")
    x = lambda i, j: php_var(i, j, m)  # noqa: E731
    clauses = []
    for i in range(1, m + 2):
        for j, k in itertools.combinations(range(1, m + 1), 2):
            clauses.append(Clause([-x(i, j), *(x(i, l) for l in range(j + 1, k)), -x(i, k)]))
    for j in range(1, m + 1):
        clauses.append(Clause(x(i, j) for i in range(1, m + 2)))
        for i, k, i2 in itertools.combinations(range(1, m + 2), 3):
            clauses.append(Clause([-x(i, j), *(x(l, j) for l in range(i + 1, k)), -x(k, j), -x(i2, j)]))
    return ClauseMultiset(clauses, num_vars=m * (m + 1))


# --- Tseitin ---------------------------------------------------------------

@dataclass
class ChargedGraph:
    num_vertices: int
    edges: list  # [(u, v)], u != v, parallel edges allowed
    charge: tuple

    def __post_init__(self):
        self.edges = [tuple(e) for e in self.edges]
        self.charge = tuple(int(b) & 1 for b in self.charge)
        if len(self.charge) != self.num_vertices:
            raise ValueError("charge vector length must equal the vertex count")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge {(u, v)} out of range")

    @property
    def num_edges(self):
        return len(self.edges)

    @property
    def total_charge(self) -> int:
        return sum(self.charge) % 2

    def incident(self, u) -> list:
        return [k for k, e in enumerate(self.edges) if u in e]

    def is_connected(self) -> bool:
        if self.num_vertices == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for a, b in self.edges:
                for s, t in ((a, b), (b, a)):
                    if s == u and t not in seen:
                        seen.add(t)
                        stack.append(t)
        return len(seen) == self.num_vertices


def parity_clauses(edge_vars: Sequence[int], parity: int) -> list:
    """Clauses forcing XOR(edge_vars) == parity: one per wrong-parity point."""
    out = []
    for bits in itertools.product((0, 1), repeat=len(edge_vars)):
        if sum(bits) % 2 != parity:
            # the clause falsified exactly by this point
            out.append(Clause(-v if b else v for v, b in zip(edge_vars, bits)))
    return out


def tseitin(g: ChargedGraph) -> ClauseMultiset:
    clauses = []
    for u in range(g.num_vertices):
        clauses.extend(parity_clauses([k + 1 for k in g.incident(u)], g.charge[u]))
    return ClauseMultiset(clauses, num_vars=g.num_edges)


def triangle(charge=(1, 1, 1)) -> ChargedGraph:
    return ChargedGraph(3, [(0, 1), (1, 2), (0, 2)], charge)


def complete_graph(n: int, charge=None) -> ChargedGraph:
    charge = charge if charge is not None else (1,) + (0,) * (n - 1)
    return ChargedGraph(n, list(itertools.combinations(range(n), 2)), charge)


def cycle_graph(n: int, charge=None) -> ChargedGraph:
    charge = charge if charge is not None else (1,) + (0,) * (n - 1)
    return ChargedGraph(n, [(i, (i + 1) % n) for i in range(n)], charge)


def random_regular_graph(d: int, n: int, seed: int, charge=None) -> ChargedGraph:
    """Seeded connected d-regular simple graph, default charge e_0 (odd)."""
    import networkx as nx

    for attempt in range(1000):
        G = nx.random_regular_graph(d, n, seed=seed + attempt)
        if nx.is_connected(G):
            break
    else:
        raise RuntimeError("no connected regular graph found")
    edges = sorted(tuple(sorted(e)) for e in G.edges())
    charge = charge if charge is not None else (1,) + (0,) * (n - 1)
    return ChargedGraph(n, edges, charge)


# --- DAGs and pebbling formulas ---------------------------------------------

@dataclass
class Dag:
    preds: tuple  # preds[v] = tuple of predecessor vertices
    names: Optional[tuple] = None
    succs: tuple = field(init=False, repr=False)

    def __post_init__(self):
        self.preds = tuple(tuple(p) for p in self.preds)
        succ = [[] for _ in self.preds]
        for v, ps in enumerate(self.preds):
            for u in ps:
                if not 0 <= u < len(self.preds):
                    raise ValueError(f"predecessor {u} of {v} out of range")
                succ[u].append(v)
        self.succs = tuple(tuple(s) for s in succ)
        if self.topological_order() is None:
            raise ValueError("graph has a cycle")

    @property
    def num_vertices(self):
        return len(self.preds)

    def sources(self):
        return [v for v, p in enumerate(self.preds) if not p]

    def sinks(self):
        return [v for v, s in enumerate(self.succs) if not s]

    @property
    def sink(self) -> int:
        s = self.sinks()
        if len(s) != 1:
            raise ValueError(f"DAG has {len(s)} sinks, expected one")
        return s[0]

    def topological_order(self):
        indeg = [len(p) for p in self.preds]
        order = [v for v in range(len(indeg)) if indeg[v] == 0]
        for v in order:
            for w in self.succs[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    order.append(w)
        return order if len(order) == len(self.preds) else None

    def ancestors(self, v) -> set:
        seen, stack = set(), [v]
        while stack:
            for u in self.preds[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen

    def descendants(self, v) -> set:
        seen, stack = set(), [v]
        while stack:
            for u in self.succs[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen

    def comparable(self, u, v) -> bool:
        return u == v or u in self.ancestors(v) or v in self.ancestors(u)

    def siblings(self) -> list:
        """Incomparable pairs (u, v), u < v, sharing a common predecessor."""
        out = set()
        for p in range(self.num_vertices):
            for u, v in itertools.combinations(sorted(self.succs[p]), 2):
                if not self.comparable(u, v):
                    out.add((u, v))
        return sorted(out)

    def name(self, v) -> str:
        return self.names[v] if self.names else str(v)


def pyramid(h: int) -> Dag:
    """Pyramid of height h: h+1 layers, sources (h+1 of them) first.

    Vertices are numbered layer by layer from the sources down to the sink,
    left to right, which is the processing order of the linear MaxRes
    refutation.  Vertex j of a layer has predecessors j and j+1 of the layer
    above.
    """
    if h < 0:
        raise ValueError("height must be >= 0")
    preds = []
    layer_start = []
    start = 0
    for level in range(h + 1):
        width = h + 1 - level
        layer_start.append(start)
        for j in range(width):
            if level == 0:
                preds.append(())
            else:
                up = layer_start[level - 1]
                preds.append((up + j, up + j + 1))
        start += width
    return Dag(preds)


def pyramid_layers(h: int) -> list:
    layers, start = [], 0
    for level in range(h + 1):
        width = h + 1 - level
        layers.append(list(range(start, start + width)))
        start += width
    return layers


def pebbling(g: Dag, hints: bool = False) -> ClauseMultiset:
    clauses = []
    for v in range(g.num_vertices):
        if not g.preds[v]:
            clauses.append(Clause([v + 1]))
    for v in range(g.num_vertices):
        if g.preds[v]:
            clauses.append(Clause([*(-(u + 1) for u in g.preds[v]), v + 1]))
    clauses.append(Clause([-(g.sink + 1)]))
    if hints:
        for u, v in g.siblings():
            clauses.append(Clause([u + 1, v + 1]))
    return ClauseMultiset(clauses, num_vars=g.num_vertices)


def pebhint(g: Dag) -> ClauseMultiset:
    return pebbling(g, hints=True)


# --- composition -------------------------------------------------------------

def copy_var(x: int, i: int) -> int:
    """Variable of copy i (1 or 2) of original variable x."""
    return 2 * x - 2 + i


def original_var(y: int):
    """Inverse of copy_var: (x, i)."""
    return (y + 1) // 2, 2 - y % 2


def _gadget_cnf(lit: int, gadget: str) -> list:
    """CNF (list of literal lists) for ``g(x1, x2) == b`` where lit = x^b."""
    x = abs(lit)
    x1, x2 = copy_var(x, 1), copy_var(x, 2)
    if gadget == "or":
        return [[x1, x2]] if lit > 0 else [[-x1], [-x2]]
    if gadget == "xor":
        # falsifying subcubes {00, 11} resp. {01, 10}: pairwise disjoint
        return [[x1, x2], [-x1, -x2]] if lit > 0 else [[x1, -x2], [-x1, x2]]
    raise ValueError(f"unknown gadget {gadget!r}")


def compose_clause(c: Clause, gadget: str) -> list:
    parts = [_gadget_cnf(l, gadget) for l in c.lits]
    return [Clause(itertools.chain.from_iterable(choice)) for choice in itertools.product(*parts)]


def compose(F: ClauseMultiset, gadget: str = "xor") -> ClauseMultiset:
    gadget = gadget.lower().rstrip("2")
    clauses = []
    for c in F:
        clauses.extend(compose_clause(c, gadget))
    return ClauseMultiset(clauses, num_vars=2 * F.num_vars)


def compose_assignment_bits(a1: int, a2: int, n: int) -> int:
    """Pack (alpha1, alpha2) into the interleaved composed numbering."""
    out = 0
    for x in range(1, n + 1):
        b1 = (a1 >> (n - x)) & 1
        b2 = (a2 >> (n - x)) & 1
        out = (out << 2) | (b1 << 1) | b2
    return out


# --- subset cardinality -------------------------------------------------------

@dataclass
class BipartiteDegreeGraph:
    n: int
    edges: list  # [(u, v)] with u in range(n) (left), v in range(n) (right)

    def __post_init__(self):
        self.edges = [tuple(e) for e in self.edges]
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {(u, v)} out of range")

    def left_edges(self, u) -> list:
        return [k for k, (a, _) in enumerate(self.edges) if a == u]

    def right_edges(self, v) -> list:
        return [k for k, (_, b) in enumerate(self.edges) if b == v]

    def left_degrees(self):
        return [len(self.left_edges(u)) for u in range(self.n)]

    def right_degrees(self):
        return [len(self.right_edges(v)) for v in range(self.n)]

    def validate(self):
        for side, degs in (("left", self.left_degrees()), ("right", self.right_degrees())):
            if sorted(degs) != [4] * (self.n - 1) + [5]:
                raise ValueError(f"{side} degrees {degs}: need all 4 except one 5")


def random_regular_bipartite(n: int, seed: int) -> BipartiteDegreeGraph:
    """4-regular bipartite circulant (right side seed-permuted) plus one edge.

    The extra edge joins one left and one right vertex, so each side gets a
    single degree-5 vertex; a non-adjacent pair is chosen when one exists.
    """
    if n < 4:
        raise ValueError("need n >= 4 for a 4-regular bipartite graph")
    rng = np.random.default_rng(seed)
    perm = [int(p) for p in rng.permutation(n)]
    edges = [(u, perm[(u + k) % n]) for u in range(n) for k in range(4)]
    present = set(edges)
    free = [(u, v) for u in range(n) for v in range(n) if (u, v) not in present]
    if free:
        extra = free[int(rng.integers(len(free)))]
    else:
        extra = (int(rng.integers(n)), int(rng.integers(n)))
    edges.append(extra)
    edges.sort()
    return BipartiteDegreeGraph(n, edges)


def subset_cardinality(g: BipartiteDegreeGraph) -> ClauseMultiset:
    """Left vertices: at least ceil(d/2) true edges; right: at most floor(d/2)."""
    g.validate()
    clauses = []
    for u in range(g.n):
        es = [k + 1 for k in g.left_edges(u)]
        for I in itertools.combinations(es, len(es) // 2 + 1):
            clauses.append(Clause(I))
    for v in range(g.n):
        es = [k + 1 for k in g.right_edges(v)]
        for I in itertools.combinations(es, len(es) // 2 + 1):
            clauses.append(Clause(-e for e in I))
    return ClauseMultiset(clauses, num_vars=len(g.edges))


def expected_clause_count_subset_cardinality(g: BipartiteDegreeGraph) -> int:
    return sum(comb(d, d // 2 + 1) for d in g.left_degrees() + g.right_degrees())
