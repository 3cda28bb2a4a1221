"""Prover-Delayer games and the strategies used for tree-like lower bounds.

A Delayer answers a queried variable with 0, 1 or "*".  On "*" the Prover
picks the value and the Delayer scores a point.  The game ends as soon as
the partial assignment falsifies a clause of the formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..core import Clause, ClauseMultiset
from ..families import Dag, original_var, copy_var
from ..treeres import Leaf, TreeRefutation, count_leaves
from .pebbling import PebbleOracle, lowest_path, subgraph_modulo

STAR = "*"


class ProtocolError(RuntimeError):
    pass


@dataclass
class GameTranscript:
    moves: list = field(default_factory=list)  # (var, answer, value, points so far)
    falsified: Optional[Clause] = None
    points: int = 0

    @property
    def queries(self):
        return len(self.moves)

    def to_dict(self):
        return {
            "moves": [[v, a, val, p] for v, a, val, p in self.moves],
            "falsified": None if self.falsified is None else list(self.falsified.lits),
            "points": self.points,
        }


def _falsified(F, partial):
    for c in F:
        if all(abs(l) in partial and partial[abs(l)] != (l > 0) for l in c.lits):
            return c
    return None


def prover_delayer_play(F: ClauseMultiset, prover, delayer, max_rounds: Optional[int] = None) -> GameTranscript:
    partial = {}
    t = GameTranscript()
    limit = max_rounds if max_rounds is not None else F.num_vars + 1
    for _ in range(limit + 1):
        c = _falsified(F, partial)
        if c is not None:
            t.falsified = c
            return t
        x = prover.query(partial)
        ans = delayer.answer(x, partial)
        if ans == STAR:
            val = prover.choose(x, partial)
            t.points += 1
        elif ans in (0, 1):
            val = ans
        else:
            raise ProtocolError(f"invalid answer {ans!r} for x{x}")
        if x in partial and partial[x] != val:
            raise ProtocolError(f"x{x} already set to {partial[x]}, answered {val}")
        partial[x] = val
        prover.observe(x, val)
        t.moves.append((x, ans, val, t.points))
    raise ProtocolError("game did not end (formula satisfiable or prover looping)")


# --- provers ---------------------------------------------------------------

class TreeProver:
    """Walks a tree-like refutation from the root, querying pivots.

    The current node's clause is always falsified by the answers so far;
    after x is set, the walk moves to the child whose clause contains the
    literal that the answer falsifies.  On "*" it sets x to enter the
    child with fewer leaves.
    """

    def __init__(self, tree: TreeRefutation):
        self.tree = tree
        self.node = tree.root

    def _advance(self, partial):
        while not isinstance(self.node, Leaf) and self.node.pivot in partial:
            self.observe(self.node.pivot, partial[self.node.pivot])

    def query(self, partial):
        self._advance(partial)
        if isinstance(self.node, Leaf):
            raise ProtocolError("tree prover reached a leaf but no clause is falsified")
        return self.node.pivot

    def choose(self, x, partial):
        # x=0 falsifies +x, so it enters the pos child
        return 0 if count_leaves(self.node.pos) <= count_leaves(self.node.neg) else 1

    def observe(self, x, val):
        if isinstance(self.node, Leaf) or self.node.pivot != x:
            return
        self.node = self.node.neg if val else self.node.pos


class OrderProver:
    """Queries variables in a fixed order; on "*" picks a fixed value."""

    def __init__(self, order, star_value=0):
        self.order = list(order)
        self.star_value = star_value

    def query(self, partial):
        for v in self.order:
            if v not in partial:
                return v
        raise ProtocolError("order exhausted")

    def choose(self, x, partial):
        return self.star_value

    def observe(self, x, val):
        pass


# --- delayers --------------------------------------------------------------

class FixedDelayer:
    """Answers according to a fixed total assignment (dict var -> bit)."""

    def __init__(self, values):
        self.values = dict(values)

    def answer(self, x, partial):
        return self.values[x]


class PebblingAdversary:
    """Adversary for the 1-query game on the hinted pebbling formula.

    Keeps the set R of vertices answered 1, a distinguished vertex w (the
    sink initially) and a path from w to the sink; queried vertices on the
    path are exactly those answered 0.  Variables are 1-based (vertex v is
    variable v+1).
    """

    def __init__(self, g: Dag, oracle: PebbleOracle = None):
        self.g = g
        self.oracle = oracle or PebbleOracle(g)
        self.R = set()
        self.w = g.sink
        self.path = [g.sink]  # from w down to the sink
        self.ones = 0
        self.answers = {}

    def answer(self, var: int) -> int:
        v = var - 1
        if v in self.answers:
            return self.answers[v]
        region = subgraph_modulo(self.g, self.w, self.R)
        if v not in region:
            a = 0 if v in self.path else 1
        else:
            p0 = self.oracle.bpeb(self.R, v)
            p1 = self.oracle.bpeb(self.R | {v}, self.w)
            # answer 0 only if that keeps bpeb(R -> w) <= p0; on a tie the
            # inequality bpeb(R -> w) <= max(p0, p1 + 1) only guarantees p1 + 1
            if p0 > p1:
                a = 0
                ext = lowest_path(self.g, v, self.w, region)
                self.path = ext[:-1] + self.path
                self.w = v
            else:
                a = 1
        if a == 1:
            self.R.add(v)
            self.ones += 1
        self.answers[v] = a
        return a


class ComposedDelayer:
    """Delayer for F composed with OR, driven by a 1-query strategy for F.

    On the first query touching original variable x it asks the inner
    strategy: 0 becomes answer 0, 1 becomes "*".  Later copies of x are
    answered so that x1 OR x2 equals the inner answer.
    """

    def __init__(self, inner):
        self.inner = inner
        self.inner_answers = {}

    def answer(self, y, partial):
        if y in partial:
            return partial[y]
        x, i = original_var(y)
        if x in self.inner_answers:
            if self.inner_answers[x] == 0:
                return 0
            other = copy_var(x, 3 - i)
            if other in partial:
                return 1 if partial[other] == 0 else 0
            return STAR
        a = self.inner.answer(x)
        self.inner_answers[x] = a
        return 0 if a == 0 else STAR


def pebbling_delayer(g: Dag, oracle: PebbleOracle = None) -> ComposedDelayer:
    return ComposedDelayer(PebblingAdversary(g, oracle))
