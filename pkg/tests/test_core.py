import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxreskit.core import (
    Assignment,
    Clause,
    ClauseMultiset,
    Cube,
    CubeMultiset,
    RangeError,
    TautologyError,
    all_assignments,
    cube_hits,
    cubes_of,
    eval_clause,
    falsifying_cube,
    restrict,
    viol,
)
from maxreskit.families import php

from conftest import brute_viol


def A(*bits):
    return Assignment.from_values(bits)


@pytest.mark.parametrize("lits, bits, expected", [
    ([1, -2], (0, 0), True),
    ([1], (0,), False),
    ([1, -1], (1,), True),
])
def test_eval_clause(lits, bits, expected):
    assert eval_clause(Clause(lits), A(*bits)) is expected


def test_eval_clause_range_error():
    with pytest.raises(RangeError):
        eval_clause(Clause([3]), A(0, 1))


def test_assignment_order_is_lexicographic():
    got = [a.values() for a in all_assignments(3)]
    assert got == list(itertools.product((0, 1), repeat=3))


def test_clause_canonical():
    c = Clause([3, -1, 3, 2])
    assert c.lits == (-1, 2, 3)
    assert c.width == 3
    assert Clause([2, -1]) == Clause([-1, 2])
    assert Clause([1, -1]).is_tautology
    assert Clause().is_empty


def test_cube_rejects_double_fix():
    with pytest.raises(ValueError):
        Cube([1, -1])


def test_viol_examples():
    assert viol(ClauseMultiset([], num_vars=2), A(1, 0)) == 0
    # PHP_1 = {x11, x21, -x11 v -x21} at (0,0) falsifies both units
    assert viol(php(1), A(0, 0)) == 2
    assert viol(ClauseMultiset([[1], [1]]), A(0)) == 2


def test_falsifying_cube():
    assert falsifying_cube(Clause([1, -2])).as_dict() == {1: 0, 2: 1}
    assert falsifying_cube(Clause()).width == 0
    assert falsifying_cube(Clause([-1, -2])).as_dict() == {1: 1, 2: 1}
    with pytest.raises(TautologyError):
        falsifying_cube(Clause([1, -1]))


def test_cube_hits_examples():
    assert cube_hits(CubeMultiset([Cube()], num_vars=2), A(1, 1)) == 1
    G = CubeMultiset([Cube([-1, -2])], num_vars=2)
    assert cube_hits(G, A(0, 0)) == 1
    assert cube_hits(G, A(1, 0)) == 0
    assert cube_hits(CubeMultiset([Cube([1]), Cube([1])], num_vars=1), A(1)) == 2


def test_restrict_examples():
    F = ClauseMultiset([[1, 2]])
    assert len(restrict(F, Cube([1]))) == 0
    assert restrict(F, Cube([-1])).clauses == [Clause([2])]
    assert restrict(ClauseMultiset([[1]]), Cube([-1])).clauses == [Clause()]


def test_multiset_equality_ignores_order():
    assert ClauseMultiset([[1], [2, 1]]) == ClauseMultiset([[1, 2], [1]])
    assert ClauseMultiset([[1], [1]], num_vars=2) != ClauseMultiset([[1]], num_vars=2)


def test_num_vars_range():
    with pytest.raises(RangeError):
        ClauseMultiset([[3]], num_vars=2)


clause_st = st.lists(st.integers(1, 5).flatmap(lambda v: st.sampled_from([v, -v])),
                     max_size=4).map(Clause)


@settings(max_examples=100, deadline=None)
@given(clause_st)
def test_falsified_iff_in_cube(c):
    if c.is_tautology:
        return
    q = falsifying_cube(c)
    for a in all_assignments(5):
        assert (not eval_clause(c, a)) == q.contains(a)


@settings(max_examples=60, deadline=None)
@given(st.lists(clause_st, max_size=6))
def test_viol_matches_reference_and_cubes(cls):
    F = ClauseMultiset(cls, num_vars=5)
    taut_free = ClauseMultiset([c for c in cls if not c.is_tautology], num_vars=5)
    G = cubes_of(taut_free)
    for a in all_assignments(5):
        assert viol(F, a) == brute_viol(F, a.values())
        assert cube_hits(G, a) == viol(taut_free, a)


@settings(max_examples=60, deadline=None)
@given(st.lists(clause_st, max_size=6), st.dictionaries(st.integers(1, 5), st.integers(0, 1), max_size=3))
def test_restrict_preserves_viol_on_extensions(cls, fixed):
    F = ClauseMultiset(cls, num_vars=5)
    R = restrict(F, Cube.from_dict(fixed))
    for a in all_assignments(5):
        if all(a[v] == b for v, b in fixed.items()):
            assert viol(F, a) == viol(R, a)


def test_exhaustive_cube_semantics_n16():
    import numpy as np

    n = 16
    bits = np.arange(1 << n, dtype=np.int64)
    for c in [Clause([1, -16]), Clause([-3, 5, 9, 12]), Clause([])]:
        mask, val = falsifying_cube(c).mask_value(n)
        falsified = np.ones(bits.shape, dtype=bool)
        for l in c.lits:
            falsified &= ((bits >> (n - abs(l))) & 1) != (1 if l > 0 else 0)
        assert np.array_equal(falsified, (bits & mask) == val)
