"""Resolution width by saturation."""

from __future__ import annotations

from typing import Optional

from ..core import ClauseMultiset


def _masks(c):
    pos = neg = 0
    for l in c.lits:
        if l > 0:
            pos |= 1 << l
        else:
            neg |= 1 << -l
    return pos, neg


def _width(c):
    return bin(c[0]).count("1") + bin(c[1]).count("1")


def saturate(F: ClauseMultiset, w: int) -> set:
    """Closure of the axioms of width <= w under resolvents of width <= w."""
    start = {_masks(c) for c in F if not c.is_tautology and c.width <= w}
    known = set(start)
    queue = sorted(start)
    done = []
    while queue:
        c = queue.pop()
        for d in done:
            clash = (c[0] & d[1]) | (c[1] & d[0])
            if not clash or clash & (clash - 1):
                continue  # no pivot, or the resolvent is a tautology
            r = ((c[0] | d[0]) & ~clash, (c[1] | d[1]) & ~clash)
            if _width(r) <= w and r not in known:
                known.add(r)
                queue.append(r)
        done.append(c)
    return known


def min_res_width(F: ClauseMultiset) -> Optional[int]:
    """Least w such that width-w saturation derives the empty clause.

    The value counts axioms too, so it is the smallest possible maximum
    clause width over all resolution refutations.  None if F is satisfiable.
    """
    for w in range(F.num_vars + 1):
        if (0, 0) in saturate(F, w):
            return w
    return None
