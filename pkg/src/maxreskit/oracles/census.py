"""Level sets of viol for Tseitin formulas."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from ..families import ChargedGraph, tseitin
from ..subcubesums import viol_table


@dataclass
class Census:
    counts: dict  # viol value -> number of assignments
    closed_form: dict = field(default_factory=dict)  # odd i -> C(n,i) 2^(m-n+1)
    all_odd: bool = False
    matches: bool = False
    checked: bool = False  # False if the graph is disconnected or the charge even

    def to_dict(self):
        return {
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "closed_form": {str(k): v for k, v in sorted(self.closed_form.items())},
            "all_odd": self.all_odd,
            "matches": self.matches,
            "checked": self.checked,
        }


def tseitin_level_census(g: ChargedGraph, max_edges: int = 20) -> Census:
    m, n = g.num_edges, g.num_vertices
    if m > max_edges:
        raise ValueError(f"census over {m} edges exceeds {max_edges}")
    vals = viol_table(tseitin(g)).values
    levels, freq = np.unique(vals, return_counts=True)
    counts = {int(k): int(c) for k, c in zip(levels, freq)}
    out = Census(counts, all_odd=all(k % 2 == 1 for k in counts))
    if g.is_connected() and g.total_charge % 2 == 1:
        out.checked = True
        out.closed_form = {i: comb(n, i) << (m - n + 1) for i in range(1, n + 1, 2)}
        nonzero = {i: c for i, c in out.closed_form.items() if c}
        out.matches = nonzero == counts
    return out
