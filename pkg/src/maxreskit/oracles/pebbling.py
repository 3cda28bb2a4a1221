"""Black pebbling cost bpeb(P -> w) by state-space search.

Game: a pebble may be placed on v when all predecessors of v carry pebbles,
moved ("slid") from a predecessor of v onto v under the same condition,
or removed at any time.  Vertices in P hold free pebbles for the whole
game.  The cost is the largest number of pebbles ever on the board outside
P; bpeb(P -> w) is the least cost of a play that pebbles w.  With sliding
moves the pyramid of height h costs h+1.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque

from ..families import Dag


class PebblingError(ValueError):
    pass


def subgraph_modulo(g: Dag, w: int, U) -> set:
    """Vertices with a path to w that avoids U (w itself included unless in U)."""
    U = set(U)
    if w in U:
        return set()
    seen = {w}
    stack = [w]
    while stack:
        x = stack.pop()
        for p in g.preds[x]:
            if p not in U and p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


class PebbleOracle:
    def __init__(self, g: Dag):
        self.g = g
        self.memo = {}
        self.states_explored = 0

    def bpeb(self, P=(), w=None) -> int:
        g = self.g
        if w is None:
            w = g.sink
        if not 0 <= w < g.num_vertices:
            raise PebblingError(f"vertex {w} not in the graph")
        P = frozenset(P)
        if w in P:
            return 0
        rel = subgraph_modulo(g, w, P)
        # only the free pebbles adjacent to the relevant region matter
        boundary = frozenset(p for v in rel for p in g.preds[v] if p in P)
        key = (w, boundary)
        if key not in self.memo:
            self.memo[key] = self._search(sorted(rel), boundary, w)
        return self.memo[key]

    def _search(self, verts, free, w) -> int:
        g = self.g
        idx = {v: i for i, v in enumerate(verts)}
        need = []  # per vertex: mask of relevant preds that must be pebbled
        for v in verts:
            m = 0
            for p in g.preds[v]:
                if p in free:
                    continue
                if p not in idx:
                    raise PebblingError(f"predecessor {p} of {v} is outside the search region")
                m |= 1 << idx[p]
            need.append(m)
        goal = 1 << idx[w]
        k = len(verts)
        best = {0: 0}
        heap = [(0, 0)]
        while heap:
            cost, S = heapq.heappop(heap)
            if best.get(S, None) != cost:
                continue
            self.states_explored += 1
            if S & goal:
                return cost
            nxt = []
            for i in range(k):
                bit = 1 << i
                if S & bit:
                    nxt.append(S & ~bit)
                elif S & need[i] == need[i]:
                    nxt.append(S | bit)
                    on = need[i]
                    while on:
                        low = on & -on
                        nxt.append((S & ~low) | bit)
                        on &= on - 1
            for T in nxt:
                c = max(cost, bin(T).count("1"))
                if c < best.get(T, 1 << 30):
                    best[T] = c
                    heapq.heappush(heap, (c, T))
        raise PebblingError(f"vertex {w} cannot be pebbled")


def bpeb(g: Dag, P=(), w=None) -> int:
    return PebbleOracle(g).bpeb(P, w)


def intermediate_inequality_sweep(g: Dag, oracle: PebbleOracle = None, subsets=None):
    """Check bpeb(P->v) <= max(bpeb(P->w), bpeb(P+{w}->v) + 1) over all
    (P, v, w), or over the given iterable of P.  Returns (checked, violations)."""
    oracle = oracle or PebbleOracle(g)
    V = range(g.num_vertices)
    if subsets is None:
        subsets = (frozenset(s) for r in range(g.num_vertices + 1) for s in itertools.combinations(V, r))
    checked, bad = 0, []
    for P in subsets:
        P = frozenset(P)
        for v in V:
            left = oracle.bpeb(P, v)
            for w in V:
                right = max(oracle.bpeb(P, w), oracle.bpeb(P | {w}, v) + 1)
                checked += 1
                if left > right:
                    bad.append((sorted(P), v, w, left, right))
    return checked, bad


def lowest_path(g: Dag, src: int, dst: int, allowed: set) -> list:
    """Lexicographically smallest-index BFS path src -> dst inside ``allowed``."""
    succs = g.succs
    prev = {src: None}
    q = deque([src])
    while q:
        x = q.popleft()
        if x == dst:
            break
        for s in sorted(succs[x]):
            if s in allowed and s not in prev:
                prev[s] = x
                q.append(s)
    if dst not in prev:
        raise PebblingError(f"no path from {src} to {dst}")
    path, x = [], dst
    while x is not None:
        path.append(x)
        x = prev[x]
    return path[::-1]
