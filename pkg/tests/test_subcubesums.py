import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxreskit.core import Clause, ClauseMultiset, Cube, CubeMultiset, RangeError, all_assignments, cube_hits
from maxreskit.families import compose, pebhint, php, pyramid, triangle, tseitin
from maxreskit.subcubesums import (
    CertificateError,
    PseudoFunction,
    ScsCertificate,
    check_certificate,
    compose_xor_check,
    compose_xor_sweep,
    from_pointwise,
    hits_table,
    lift_xor,
    measures,
    pointwise_certificate,
    viol_table,
)

from conftest import brute_viol


def test_viol_table_php1():
    # ordering (x11, x21): 00 falsifies both units, 11 the hole clause
    assert viol_table(php(1)).tolist() == [2, 1, 1, 1]


def test_check_certificate_examples():
    F = php(1)
    ok = ScsCertificate(F, CubeMultiset([Cube([-1, -2])], num_vars=2))
    assert check_certificate(ok).passed
    assert check_certificate(ScsCertificate(ClauseMultiset([[1], [-1]]), CubeMultiset([], num_vars=1))).passed
    bad = check_certificate(ScsCertificate(F, CubeMultiset([], num_vars=2)))
    assert not bad.passed and bad.witness == (0, 0)


def test_mismatched_num_vars():
    with pytest.raises(CertificateError):
        ScsCertificate(php(1), CubeMultiset([], num_vars=3))


def test_exhaustive_limit():
    F = ClauseMultiset([[1]], num_vars=30)
    with pytest.raises(RangeError):
        check_certificate(ScsCertificate(F, CubeMultiset([], num_vars=30)), limit=24)


def test_sampled_mode_finds_dense_error():
    F = php(2)
    v = check_certificate(ScsCertificate(F, CubeMultiset([], num_vars=6)), mode="sampled", samples=200, seed=1)
    assert not v.passed and v.seed == 1
    assert brute_viol(F, v.witness) != 1


def test_measures():
    assert measures(CubeMultiset([], num_vars=2)) == (0, 0)
    G = CubeMultiset([Cube([-1]), Cube([-1]), Cube([1, 2])], num_vars=2)
    assert measures(G) == (3, 2)


def test_degree_counts_formula_width():
    cert = ScsCertificate(php(1), CubeMultiset([Cube([-1])], num_vars=2))
    assert cert.width == 1 and cert.degree == 2


def test_from_pointwise_examples():
    assert from_pointwise(PseudoFunction([0, 0, 0, 0], 2)).size == 0
    assert from_pointwise(PseudoFunction([1, 0, 0, 0], 2)) == CubeMultiset([Cube([-1, -2])], num_vars=2)
    G = from_pointwise(PseudoFunction([2, 0, 0, 1], 2))
    assert G == CubeMultiset({Cube([-1, -2]): 2, Cube([1, 2]): 1}, num_vars=2)


def test_from_pointwise_rejects_negative():
    with pytest.raises(CertificateError, match=r"\(0, 1\)"):
        from_pointwise(PseudoFunction([0, -1, 0, 0], 2))


@pytest.mark.parametrize("F", [php(1), php(2), tseitin(triangle()), pebhint(pyramid(2))])
def test_pointwise_completeness(F):
    cert = pointwise_certificate(F)
    assert check_certificate(cert).passed
    assert cert.width == F.num_vars


def test_pointwise_rejects_satisfiable():
    with pytest.raises(CertificateError):
        pointwise_certificate(ClauseMultiset([[1, 2]]))


def test_hits_table_matches_cube_hits():
    G = CubeMultiset([Cube([1]), Cube([-2, 3]), Cube([])], num_vars=3)
    t = hits_table(G)
    for a in all_assignments(3):
        assert t(a) == cube_hits(G, a)


@pytest.mark.parametrize("F", [php(1), tseitin(triangle()), ClauseMultiset([[1, -2], [2], [-1]])])
def test_xor_commutation_pairs(F):
    n = F.num_vars
    for a1, a2 in itertools.product(itertools.product((0, 1), repeat=n), repeat=2):
        assert compose_xor_check(F, a1, a2).passed


def test_xor_sweep_and_lift():
    F = tseitin(triangle())
    assert compose_xor_sweep(F).passed
    composed = compose(F, "xor")
    assert lift_xor(viol_table(F) - 1) == viol_table(composed) - 1


def test_or_composition_does_not_commute_with_xor_semantics():
    # sanity: the check can fail; OR blocks are not the XOR lift
    F = ClauseMultiset([[1]])
    v = compose_xor_check(F, (1,), (1,), composed=compose(F, "or"))
    assert not v.passed


_lit = st.integers(1, 5).flatmap(lambda v: st.sampled_from([v, -v]))
_formula = st.lists(st.lists(_lit, min_size=0, max_size=3), min_size=1, max_size=8).map(
    lambda cls: ClauseMultiset([Clause(c) for c in cls if not Clause(c).is_tautology] or [[]], num_vars=5))


@settings(max_examples=60, deadline=None)
@given(_formula)
def test_pointwise_certificate_iff_unsat(F):
    unsat = all(brute_viol(F, v) >= 1 for v in itertools.product((0, 1), repeat=5))
    if unsat:
        assert check_certificate(pointwise_certificate(F)).passed
    else:
        with pytest.raises(CertificateError):
            pointwise_certificate(F)


@settings(max_examples=40, deadline=None)
@given(_formula)
def test_xor_lift_matches_composed_viol(F):
    assert (lift_xor(viol_table(F)).values == viol_table(compose(F, "xor")).values).all()
