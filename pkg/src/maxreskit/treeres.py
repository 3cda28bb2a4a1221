"""Tree-like resolution refutations and their translation into MaxResW logs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from .core import Clause, ClauseMultiset
from .maxres import ProofBuilder, ProofLog


class TreeError(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    clause: Clause


@dataclass(frozen=True)
class Node:
    """Resolution of ``pos`` (containing +pivot) with ``neg`` (containing -pivot)."""

    pivot: int
    pos: "TreeNode"
    neg: "TreeNode"
    clause: Clause


TreeNode = Union[Leaf, Node]


def resolve_node(pivot: int, pos: TreeNode, neg: TreeNode) -> Node:
    a, b = pos.clause, neg.clause
    if pivot not in a or -pivot not in b:
        raise TreeError(f"cannot resolve {a} and {b} on x{pivot}")
    res = Clause([l for l in a.lits if l != pivot] + [l for l in b.lits if l != -pivot])
    return Node(pivot, pos, neg, res)


def leaves(t: TreeNode):
    if isinstance(t, Leaf):
        yield t
    else:
        yield from leaves(t.pos)
        yield from leaves(t.neg)


def count_leaves(t: TreeNode) -> int:
    return 1 if isinstance(t, Leaf) else count_leaves(t.pos) + count_leaves(t.neg)


def count_nodes(t: TreeNode) -> int:
    return 2 * count_leaves(t) - 1


def is_regular(t: TreeNode, seen=frozenset()) -> bool:
    if isinstance(t, Leaf):
        return True
    if t.pivot in seen:
        return False
    s = seen | {t.pivot}
    return is_regular(t.pos, s) and is_regular(t.neg, s)


@dataclass
class TreeRefutation:
    formula: ClauseMultiset
    root: TreeNode

    def __post_init__(self):
        self.validate()

    def validate(self):
        axioms = set(self.formula.clauses)

        def check(t):
            if isinstance(t, Leaf):
                if t.clause not in axioms:
                    raise TreeError(f"leaf {t.clause} is not an axiom")
                return
            if t.pivot not in t.pos.clause or -t.pivot not in t.neg.clause:
                raise TreeError(f"pivot x{t.pivot} missing from an antecedent")
            expect = resolve_node(t.pivot, t.pos, t.neg).clause
            if expect != t.clause:
                raise TreeError(f"node clause {t.clause} is not the resolvent {expect}")
            if t.clause.is_tautology:
                raise TreeError(f"tautological resolvent {t.clause}")
            check(t.pos)
            check(t.neg)

        check(self.root)
        if not self.root.clause.is_empty:
            raise TreeError(f"root derives {self.root.clause}, not the empty clause")

    @property
    def size(self) -> int:
        """Number of clauses in the refutation (leaves plus resolution steps)."""
        return count_nodes(self.root)

    @property
    def resolutions(self) -> int:
        return count_leaves(self.root) - 1

    @property
    def num_leaves(self) -> int:
        return count_leaves(self.root)

    def is_regular(self) -> bool:
        return is_regular(self.root)


def _rebuild(t: TreeNode, path_lits: dict) -> TreeNode:
    """Regularise the subtree below a path on which ``path_lits`` were resolved.

    path_lits maps a variable resolved higher up to the literal that this
    subtree must still carry.  A repeated pivot keeps only the branch whose
    clause carries that literal; a node whose pivot went missing from a
    rebuilt child collapses into that child.
    """
    if isinstance(t, Leaf):
        return t
    if t.pivot in path_lits:
        keep = t.pos if path_lits[t.pivot] > 0 else t.neg
        return _rebuild(keep, path_lits)
    pos = _rebuild(t.pos, {**path_lits, t.pivot: t.pivot})
    neg = _rebuild(t.neg, {**path_lits, t.pivot: -t.pivot})
    if t.pivot not in pos.clause:
        return pos
    if -t.pivot not in neg.clause:
        return neg
    return resolve_node(t.pivot, pos, neg)


def regularize(tree: TreeRefutation) -> TreeRefutation:
    """Prune repeated pivots along paths (the re-resolution nearer the leaves goes)."""
    root = tree.root
    for _ in range(count_nodes(root) + 1):
        if is_regular(root):
            break
        root = _rebuild(root, {})
    if not is_regular(root):
        raise TreeError("regularisation failed")
    return TreeRefutation(tree.formula, root)


# --- MaxResW simulates tree-like resolution ---------------------------------

def simulate_treeres(tree: TreeRefutation, builder_out: Optional[dict] = None) -> ProofLog:
    """MaxResW log refuting tree.formula with at most 2·size(tree) steps.

    Every axiom is first split into disjoint weakenings, one per leaf that
    uses it, by walking the paths from those leaves to the root and
    weakening on the pivot at every branching point; the copy heading to
    the branch that contributes +x receives +x.  Then the resolution steps
    of the tree are replayed bottom-up on the weakened copies.
    """
    if not tree.is_regular():
        tree = regularize(tree)
    F = tree.formula
    b = ProofBuilder(F)
    root = tree.root

    # path (tuple of 0/1 choices from the root) of every leaf, grouped by clause
    by_axiom = {}

    def collect(t, path):
        if isinstance(t, Leaf):
            by_axiom.setdefault(t.clause, []).append(path)
        else:
            collect(t.pos, path + (0,))
            collect(t.neg, path + (1,))

    collect(root, ())
    leaf_occ = {}
    used = set()
    for axiom, paths in by_axiom.items():
        occ = next(o for o, c in F.occurrences() if c == axiom and o not in used)
        used.add(occ)

        def walk(t, path_prefix, occ, group):
            if isinstance(t, Leaf):
                leaf_occ[path_prefix] = occ
                return
            left = [p for p in group if p[len(path_prefix)] == 0]
            right = [p for p in group if p[len(path_prefix)] == 1]
            if left and right:
                eff = b.weaken(occ, t.pivot)
                (occ_pos, _), (occ_neg, _) = eff.added
                walk(t.pos, path_prefix + (0,), occ_pos, left)
                walk(t.neg, path_prefix + (1,), occ_neg, right)
            elif left:
                walk(t.pos, path_prefix + (0,), occ, left)
            else:
                walk(t.neg, path_prefix + (1,), occ, right)

        walk(root, (), occ, paths)

    derived = {}

    def run(t, path):
        if isinstance(t, Leaf):
            return leaf_occ[path]
        i = run(t.pos, path + (0,))
        j = run(t.neg, path + (1,))
        eff = b.resolve(i, j, t.pivot)
        (_, ci), (_, cj) = eff.removed
        expect = Clause([l for l in ci.lits if l != t.pivot] + [l for l in cj.lits if l != -t.pivot])
        if expect.is_tautology or eff.added[0][1] != expect:
            raise TreeError("weakened derivation produced a tautological resolvent")
        derived[path] = eff.added[0]
        return eff.added[0][0]

    run(root, ())
    if builder_out is not None:
        builder_out["derived"] = derived
        builder_out["leaf_occ"] = leaf_occ
        builder_out["builder"] = b
    return b.log()


def correspondence_ok(tree: TreeRefutation, derived: dict) -> bool:
    """Each replayed resolvent extends the tree's clause only by pivot
    literals of its ancestors (taken on its own side), and the root is □."""

    def check(t, path, anc_lits):
        if isinstance(t, Leaf):
            return True
        clause = derived[path][1]
        extra = set(clause.lits) - set(t.clause.lits)
        if not set(t.clause.lits) <= set(clause.lits) or not extra <= anc_lits:
            return False
        return (check(t.pos, path + (0,), anc_lits | {t.pivot})
                and check(t.neg, path + (1,), anc_lits | {-t.pivot}))

    return check(tree.root, (), frozenset()) and derived[()][1].is_empty


# --- enumeration ---------------------------------------------------------------

def enumerate_tree_refutations(F: ClauseMultiset, max_resolutions: int, regular_only=True, limit=None):
    """All tree-like refutations of F with at most ``max_resolutions`` steps.

    Built bottom-up by number of resolution steps; only non-tautological
    resolvents are kept, and a subtree deriving □ is never resolved further.
    """
    axioms = sorted(set(F.clauses))
    by_size = {0: [Leaf(c) for c in axioms]}
    found = 0
    for k in range(1, max_resolutions + 1):
        cur = []
        for k1 in range(k):
            k2 = k - 1 - k1
            for s in by_size[k1]:
                for t in by_size[k2]:
                    for l in s.clause.lits:
                        if l > 0 and -l in t.clause:
                            node = resolve_node(l, s, t)
                            if node.clause.is_tautology:
                                continue
                            if regular_only and not is_regular(node):
                                continue
                            if node.clause.is_empty:
                                yield TreeRefutation(F, node)
                                found += 1
                                if limit is not None and found >= limit:
                                    return
                            else:
                                cur.append(node)
        by_size[k] = cur


def dpll_tree(F: ClauseMultiset, choose) -> TreeRefutation:
    """Tree refutation read off a decision tree.

    ``choose(partial)`` returns the next variable to branch on given a dict
    of assigned values.  Branches stop at the first falsified clause.
    """
    clauses = F.clauses

    def falsified(partial):
        for c in clauses:
            if all(abs(l) in partial and partial[abs(l)] != (l > 0) for l in c.lits):
                return c
        return None

    def build(partial):
        c = falsified(partial)
        if c is not None:
            return Leaf(c)
        x = choose(partial)
        if x is None or x in partial:
            raise TreeError("decision tree stopped without falsifying a clause (satisfiable?)")
        t1 = build({**partial, x: 1})  # clause falsified under x=1, may contain -x
        t0 = build({**partial, x: 0})
        if -x not in t1.clause:
            return t1
        if x not in t0.clause:
            return t0
        return resolve_node(x, t0, t1)

    return TreeRefutation(F, build({}))


def static_order(order):
    order = list(order)

    def choose(partial):
        for v in order:
            if v not in partial:
                return v
        return None

    return choose


def shortest_clause_rule(F: ClauseMultiset):
    """Branch on the lowest variable of a shortest not-yet-satisfied clause."""
    clauses = F.clauses

    def choose(partial):
        best = None
        for c in clauses:
            if any(abs(l) in partial and partial[abs(l)] == (l > 0) for l in c.lits):
                continue
            free = [abs(l) for l in c.lits if abs(l) not in partial]
            if free and (best is None or len(free) < len(best)):
                best = free
        return min(best) if best else None

    return choose


def dpll_tree_family(F: ClauseMultiset, num_random: int = 20, seed: int = 0, max_nodes=None):
    """A deterministic family of tree refutations from different branching orders."""
    import numpy as np

    rng = np.random.default_rng(seed)
    n = F.num_vars
    strategies = [static_order(range(1, n + 1)), static_order(range(n, 0, -1)), shortest_clause_rule(F)]
    strategies += [static_order(int(v) + 1 for v in rng.permutation(n)) for _ in range(num_random)]
    seen = set()
    for choose in strategies:
        t = dpll_tree(F, choose)
        key = repr(t.root)
        if key in seen:
            continue
        seen.add(key)
        if max_nodes is None or t.size <= max_nodes:
            yield t


# --- sample trees ------------------------------------------------------------

def pyramid_sample_tree() -> TreeRefutation:
    """The tree-like refutation of the height-2 pyramid pebbling formula.

    Variables a..f are 1..6; the axiom b is used twice.
    """
    a, b_, c, d, e, f = range(1, 7)
    F = ClauseMultiset(
        [[a], [b_], [c], [-a, -b_, d], [-b_, -c, e], [-d, -e, f], [-f]], num_vars=6
    )
    L = lambda *ls: Leaf(Clause(ls))  # noqa: E731
    nb_d = resolve_node(a, L(a), L(-a, -b_, d))  # ¬b ∨ d
    d_ = resolve_node(b_, L(b_), nb_d)  # d
    ne_f = resolve_node(d, d_, L(-d, -e, f))  # ¬e ∨ f
    nc_e = resolve_node(b_, L(b_), L(-b_, -c, e))  # ¬c ∨ e
    e_ = resolve_node(c, L(c), nc_e)  # e
    f_ = resolve_node(e, e_, ne_f)  # f
    root = resolve_node(f, f_, L(-f))
    return TreeRefutation(F, root)
