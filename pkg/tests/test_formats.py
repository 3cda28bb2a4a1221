import pytest

from maxreskit.core import Clause, ClauseMultiset, Cube, CubeMultiset
from maxreskit.families import php, tseitin, triangle
from maxreskit.formats import (
    FormatError,
    format_cubes,
    format_dimacs,
    format_proof_log,
    format_tree,
    parse_cubes,
    parse_dimacs,
    parse_proof_log,
    parse_tree,
    read_proof_log,
    write_dimacs,
    write_proof_log,
)
from maxreskit.maxres import MaxResStep, ProofLog
from maxreskit.treeres import pyramid_sample_tree
from maxreskit.witnesses import pebhint_or_maxres_proof, php_scs_proof


@pytest.mark.parametrize("F", [php(1), php(2), tseitin(triangle()), ClauseMultiset([[]], num_vars=0)])
def test_dimacs_roundtrip(F):
    assert parse_dimacs(format_dimacs(F, ["hello"])) == F


def test_dimacs_keeps_duplicates_and_multiline():
    F = parse_dimacs("c x\np cnf 3 3\n1 -2\n 0 1 -2 0\n3 0\n")
    assert F.counts()[Clause([1, -2])] == 2 and F.num_vars == 3


@pytest.mark.parametrize("text, msg", [
    ("1 0\n", "before problem line"),
    ("p cnf 2 1\n1 2\n", "not terminated"),
    ("p cnf 2 2\n1 2 0\n", "promises 2"),
    ("p cnf 2 1\n1 3 0\n", "exceeds"),
    ("p cnf 2 1\n1 x 0\n", "bad integer"),
    ("p dnf 2 1\n1 0\n", "expected"),
    ("", "missing problem line"),
])
def test_dimacs_errors(text, msg):
    with pytest.raises(FormatError, match=msg):
        parse_dimacs(text)


def test_dimacs_error_has_line():
    with pytest.raises(FormatError) as e:
        parse_dimacs("p cnf 2 1\nc ok\n1 y 0\n", path="f.cnf")
    assert e.value.line == 3 and "f.cnf:3:" in str(e.value)


def test_cubes_roundtrip():
    G = php_scs_proof(2).cubes
    H, fpath = parse_cubes(format_cubes(G, "php2.cnf"))
    assert fpath == "php2.cnf" and H.counts() == G.counts() and H.num_vars == G.num_vars


def test_cubes_reject_contradictory():
    with pytest.raises(FormatError):
        parse_cubes("p cubes 2 1\n1 -1 0\n")


def test_proof_log_roundtrip(tmp_path):
    log = pebhint_or_maxres_proof(2)
    cnf = tmp_path / "f.cnf"
    write_dimacs(log.initial, cnf)
    p = tmp_path / "sub" / "p.log"
    p.parent.mkdir()
    write_proof_log(log, p, "../f.cnf")
    back, fpath = read_proof_log(p)
    assert fpath == "../f.cnf"
    assert back.initial == log.initial
    assert [str(s) for s in back.steps] == [str(s) for s in log.steps]


def test_proof_log_truncated():
    F = php(1)
    text = format_proof_log(ProofLog(F, [MaxResStep.resolve(1, 3, 1), MaxResStep.resolve(2, 4, 2)]), "x")
    cut = "\n".join(text.splitlines()[:-1]) + "\n"
    with pytest.raises(FormatError, match="truncated"):
        parse_proof_log(cut, formula=F)


@pytest.mark.parametrize("line", ["r 1 2", "w 1", "q 1 2 3", "r a 2 3"])
def test_proof_log_bad_lines(line):
    with pytest.raises(FormatError):
        parse_proof_log(f"formula x\nsteps 1\n{line}\n", formula=php(1))


def test_tree_roundtrip():
    t = pyramid_sample_tree()
    back = parse_tree(format_tree(t.root), t.formula)
    assert format_tree(back.root) == format_tree(t.root) and back.size == t.size


@pytest.mark.parametrize("text", [
    "(res 1 (1) (-1)",
    "(res 1 (1) (-1)))",
    "(res 1 (1))",
    "(res x (1) (-1))",
    "(res 1 (-1) (1))",
    "(res 1 (1) ((-1)))",
])
def test_tree_errors(text):
    with pytest.raises(FormatError):
        parse_tree(text, ClauseMultiset([[1], [-1]]))


def test_tree_leaf_must_be_axiom():
    with pytest.raises(FormatError):
        parse_tree("(res 1 (1 2) (-1))", ClauseMultiset([[1], [-1]]))
