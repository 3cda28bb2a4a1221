import itertools
from math import comb

import numpy as np
import pytest

from maxreskit.core import Clause, ClauseMultiset, falsifying_cube
from maxreskit.families import (
    BipartiteDegreeGraph,
    ChargedGraph,
    Dag,
    complete_graph,
    compose,
    compose_clause,
    copy_var,
    cycle_graph,
    expected_clause_count_subset_cardinality,
    original_var,
    pebbling,
    pebhint,
    php,
    php_delta,
    php_var,
    pyramid,
    random_regular_bipartite,
    random_regular_graph,
    subset_cardinality,
    triangle,
    tseitin,
)
from maxreskit.subcubesums import viol_table

from conftest import brute_satisfiable, brute_viol


def test_php1():
    assert php(1) == ClauseMultiset([[1], [2], [-1, -2]])


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_php_clause_count(m):
    assert len(php(m)) == (m + 1) + m * comb(m + 1, 2)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_php_unsat(m):
    assert (viol_table(php(m)).values >= 1).all()
    if m <= 2:
        assert brute_satisfiable(php(m)) is None


def test_php_delta_small():
    assert php_delta(1) == ClauseMultiset([[1, 2]])
    # 3 gap clauses (one per pigeon), 2 non-empty holes, 2 triple clauses
    assert len(php_delta(2)) == 7


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_php_delta_diagonal_satisfies(m):
    values = [0] * (m * (m + 1))
    for i in range(1, m + 1):
        values[php_var(i, i, m) - 1] = 1
    assert brute_viol(php_delta(m), values) == 0


def test_tseitin_small():
    g = ChargedGraph(2, [(0, 1)], (1, 0))
    assert tseitin(g) == ClauseMultiset([[1], [-1]])
    T = tseitin(triangle())
    assert len(T) == 6


def test_tseitin_isolated_odd_vertex_gives_empty_clause():
    g = ChargedGraph(2, [], (1, 0))
    assert tseitin(g).clauses == [Clause()]


@pytest.mark.parametrize("g", [triangle(), complete_graph(4), cycle_graph(5)])
def test_tseitin_odd_charge_unsat_and_one_per_vertex(g):
    F = tseitin(g)
    assert (viol_table(F).values % 2 == 1).all()
    blocks = [[c for c in tseitin(ChargedGraph(g.num_vertices, g.edges, g.charge)) if
               set(c.variables()) == {k + 1 for k in g.incident(u)}] for u in range(g.num_vertices)]
    for values in itertools.product((0, 1), repeat=g.num_edges):
        for blk in blocks:
            assert brute_viol(ClauseMultiset(blk, num_vars=g.num_edges), values) <= 1


@pytest.mark.parametrize("g", [complete_graph(4, (1, 1, 0, 0)), cycle_graph(4, (0, 0, 0, 0)), triangle((1, 1, 0))])
def test_tseitin_even_charge_solution_count(g):
    sols = int((viol_table(tseitin(g)).values == 0).sum())
    assert sols == 2 ** (g.num_edges - g.num_vertices + 1)


def test_random_regular_graph_seeded():
    a = random_regular_graph(3, 8, seed=5)
    b = random_regular_graph(3, 8, seed=5)
    assert a.edges == b.edges and a.is_connected() and a.num_edges == 12
    assert sum(a.charge) % 2 == 1


def test_pyramid_shape():
    g = pyramid(2)
    assert g.preds == ((), (), (), (0, 1), (1, 2), (3, 4))
    assert g.sink == 5 and g.sources() == [0, 1, 2]
    assert g.siblings() == [(3, 4)]
    for h in range(1, 6):
        assert pyramid(h).num_vertices == (h + 1) * (h + 2) // 2


def test_dag_rejects_cycle_and_multisink():
    with pytest.raises(ValueError):
        Dag([(1,), (0,)])
    with pytest.raises(ValueError):
        Dag([(), (0,), (0,)]).sink


def test_pebhint_p1_has_no_hints():
    # the two sources of P_1 share no predecessor, so no sibling hints
    F = pebhint(pyramid(1))
    assert F == ClauseMultiset([[1], [2], [-1, -2, 3], [-3]])


def test_pebhint_p2_hint():
    F = pebhint(pyramid(2))
    assert Clause([4, 5]) in F and len(F) == len(pebbling(pyramid(2))) + 1


def test_compose_xor_unit():
    assert compose(ClauseMultiset([[1]]), "XOR2") == ClauseMultiset([[1, 2], [-1, -2]])


def test_compose_or_pebhint_groups():
    g = pyramid(2)
    F = compose(pebhint(g), "OR2")
    v = lambda x, i: copy_var(x + 1, i)  # noqa: E731
    z = g.sink
    assert Clause([-v(z, 1)]) in F and Clause([-v(z, 2)]) in F
    for s in g.sources():
        assert Clause([v(s, 1), v(s, 2)]) in F
    assert Clause([v(3, 1), v(3, 2), v(4, 1), v(4, 2)]) in F
    for w in range(g.num_vertices):
        if g.preds[w]:
            a, b = g.preds[w]
            for i, j in itertools.product((1, 2), repeat=2):
                assert Clause([-v(a, i), -v(b, j), v(w, 1), v(w, 2)]) in F
    # 3 sources + 3*4 implications + 2 sink units + 1 hint
    assert len(F) == 18


def test_copy_var_roundtrip():
    for x in range(1, 10):
        for i in (1, 2):
            assert original_var(copy_var(x, i)) == (x, i)


@pytest.mark.parametrize("lits", [[1], [-1], [1, -2], [-1, -2, 3]])
def test_xor_blocks_have_disjoint_cubes(lits):
    block = compose_clause(Clause(lits), "xor")
    n = 2 * max(abs(l) for l in lits)
    pts = [set() for _ in block]
    for k, c in enumerate(block):
        q = falsifying_cube(c)
        for bits in range(1 << n):
            mask, val = q.mask_value(n)
            if bits & mask == val:
                pts[k].add(bits)
    for a, b in itertools.combinations(pts, 2):
        assert not a & b


@pytest.mark.parametrize("n, seed", [(4, 0), (5, 1), (6, 2), (8, 3)])
def test_subset_cardinality_shape(n, seed):
    g = random_regular_bipartite(n, seed)
    g.validate()
    F = subset_cardinality(g)
    assert F.num_vars == 4 * n + 1
    assert len(F) == expected_clause_count_subset_cardinality(g)
    assert sum(-(-d // 2) for d in g.left_degrees()) == 2 * n + 1
    assert sum(-(-d // 2) for d in g.right_degrees()) == 2 * n + 1
    assert random_regular_bipartite(n, seed).edges == g.edges


def test_subset_cardinality_vertex_clauses():
    g = random_regular_bipartite(4, 0)
    F = subset_cardinality(g)
    u5 = g.left_degrees().index(5)
    es = [k + 1 for k in g.left_edges(u5)]
    assert sum(1 for c in F if set(c.lits) <= set(es)) == comb(5, 3)
    u4 = g.left_degrees().index(4)
    es = [k + 1 for k in g.left_edges(u4)]
    assert sum(1 for c in F if set(c.lits) <= set(es)) == comb(4, 3)


def test_subset_cardinality_rejects_bad_degrees():
    g = BipartiteDegreeGraph(4, [(u, (u + k) % 4) for u in range(4) for k in range(4)])
    with pytest.raises(ValueError):
        subset_cardinality(g)
