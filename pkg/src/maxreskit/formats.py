"""Text formats: DIMACS CNF, cube lists, MaxRes proof logs and tree s-expressions.

Cube files use the DIMACS token grammar::

    c formula php2.cnf
    p cubes 6 7
    -1 -2 0
    ...

Proof logs::

    c any comment
    formula php2.cnf
    steps 3
    r 1 2 5
    w 4 3

The ``formula`` path is resolved relative to the log's own directory.
Tree refutations are nested s-expressions: a leaf is ``(1 -2)``, an
internal node ``(res 3 POS NEG)`` where POS contains +3 and NEG contains -3.
"""

from __future__ import annotations

import os
from collections import Counter
from pathlib import Path

from .core import Clause, ClauseMultiset, Cube, CubeMultiset
from .maxres import MaxResStep, ProofLog


class FormatError(ValueError):
    def __init__(self, msg, line=None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {msg}" if where else msg)
        self.line = line


def _int_tokens(toks, lineno, path):
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise FormatError(f"bad integer in {' '.join(toks)!r}", lineno, path) from None


def _parse_lit_lists(text: str, kind: str, path=None):
    """Shared DIMACS reader; returns (header ints, lit lists, comments)."""
    header = None
    items, cur, comments = [], [], []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("p"):
            toks = line.split()
            if header is not None:
                raise FormatError("duplicate problem line", lineno, path)
            if len(toks) != 4 or toks[1] != kind:
                raise FormatError(f"expected 'p {kind} <vars> <count>'", lineno, path)
            header = _int_tokens(toks[2:], lineno, path)
            continue
        if header is None:
            raise FormatError("data before problem line", lineno, path)
        for v in _int_tokens(line.split(), lineno, path):
            if v == 0:
                items.append(cur)
                cur = []
            else:
                if abs(v) > header[0]:
                    raise FormatError(f"literal {v} exceeds {header[0]} variables", lineno, path)
                cur.append(v)
        last_line = lineno
    if header is None:
        raise FormatError("missing problem line", None, path)
    if cur:
        raise FormatError("last entry not terminated by 0", last_line, path)
    if len(items) != header[1]:
        raise FormatError(f"header promises {header[1]} entries, found {len(items)}", last_line, path)
    return header, items, comments


def parse_dimacs(text: str, path=None) -> ClauseMultiset:
    (n, _), items, _ = _parse_lit_lists(text, "cnf", path)
    return ClauseMultiset([Clause(c) for c in items], num_vars=n)


def read_dimacs(path) -> ClauseMultiset:
    return parse_dimacs(Path(path).read_text(), path)


def format_dimacs(F: ClauseMultiset, comments=()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {F.num_vars} {len(F)}")
    lines += [" ".join(map(str, c.lits + (0,))) for c in F]
    return "\n".join(lines) + "\n"


def write_dimacs(F: ClauseMultiset, path, comments=()):
    Path(path).write_text(format_dimacs(F, comments))


def parse_cubes(text: str, path=None):
    """Returns (cube multiset, formula path from the header or None)."""
    (n, _), items, comments = _parse_lit_lists(text, "cubes", path)
    formula = None
    for c in comments:
        if c.startswith("formula "):
            formula = c[len("formula "):].strip()
    try:
        cubes = Counter(Cube(q) for q in items)
    except ValueError as e:
        raise FormatError(str(e), None, path) from None
    return CubeMultiset(cubes, num_vars=n), formula


def read_cubes(path):
    return parse_cubes(Path(path).read_text(), path)


def format_cubes(G: CubeMultiset, formula_path=None, comments=()) -> str:
    lines = []
    if formula_path is not None:
        lines.append(f"c formula {formula_path}")
    lines += [f"c {c}" for c in comments]
    lines.append(f"p cubes {G.num_vars} {G.size}")
    for q, k in sorted(G.items(), key=lambda qk: (qk[0].width, qk[0].lits)):
        lines += [" ".join(map(str, q.lits + (0,)))] * k
    return "\n".join(lines) + "\n"


def write_cubes(G, path, formula_path=None, comments=()):
    Path(path).write_text(format_cubes(G, formula_path, comments))


# --- proof logs --------------------------------------------------------------

def parse_proof_log(text: str, path=None, formula: ClauseMultiset = None):
    """Parse a proof log.  Returns (ProofLog, formula path).

    If ``formula`` is not given, the DIMACS file named in the header is
    loaded relative to ``path``'s directory.
    """
    fpath = None
    declared = None
    steps = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "formula":
            if len(toks) != 2:
                raise FormatError("expected 'formula <path>'", lineno, path)
            fpath = toks[1]
        elif toks[0] == "steps":
            if len(toks) != 2:
                raise FormatError("expected 'steps <count>'", lineno, path)
            declared = _int_tokens(toks[1:], lineno, path)[0]
        elif toks[0] == "r":
            if len(toks) != 4:
                raise FormatError("expected 'r <occ> <occ> <pivot>'", lineno, path)
            i, j, v = _int_tokens(toks[1:], lineno, path)
            steps.append(MaxResStep.resolve(i, j, v))
        elif toks[0] == "w":
            if len(toks) != 3:
                raise FormatError("expected 'w <occ> <var>'", lineno, path)
            i, v = _int_tokens(toks[1:], lineno, path)
            steps.append(MaxResStep.weaken(i, v))
        else:
            raise FormatError(f"unknown directive {toks[0]!r}", lineno, path)
    if declared is None:
        raise FormatError("missing 'steps <count>' line", None, path)
    if declared != len(steps):
        raise FormatError(f"log declares {declared} steps but contains {len(steps)} (truncated?)",
                          None, path)
    if formula is None:
        if fpath is None:
            raise FormatError("missing 'formula <path>' line", None, path)
        base = Path(path).parent if path is not None else Path(".")
        formula = read_dimacs(base / fpath)
    return ProofLog(formula, steps), fpath


def read_proof_log(path, formula: ClauseMultiset = None):
    return parse_proof_log(Path(path).read_text(), path, formula)


def format_proof_log(log: ProofLog, formula_path, comments=()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"formula {formula_path}")
    lines.append(f"steps {len(log.steps)}")
    lines += [str(s) for s in log.steps]
    return "\n".join(lines) + "\n"


def write_proof_log(log: ProofLog, path, formula_path, comments=()):
    Path(path).write_text(format_proof_log(log, formula_path, comments))


def relpath(target, start_file) -> str:
    return os.path.relpath(Path(target), Path(start_file).parent)


# --- tree refutations ----------------------------------------------------------

def _sexp_tokens(text):
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split(";", 1)[0]
        for tok in line.replace("(", " ( ").replace(")", " ) ").split():
            yield tok, lineno


def parse_sexp(text: str, path=None):
    toks = list(_sexp_tokens(text))
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(toks):
            raise FormatError("unexpected end of input", toks[-1][1] if toks else None, path)
        tok, lineno = toks[pos]
        pos += 1
        if tok == "(":
            out = []
            while True:
                if pos >= len(toks):
                    raise FormatError("unbalanced '('", lineno, path)
                if toks[pos][0] == ")":
                    pos += 1
                    return out
                out.append(read())
        if tok == ")":
            raise FormatError("unexpected ')'", lineno, path)
        return (tok, lineno)

    tree = read()
    if pos != len(toks):
        raise FormatError("trailing input after tree", toks[pos][1], path)
    return tree


def parse_tree(text: str, formula: ClauseMultiset, path=None):
    from .treeres import Leaf, TreeError, TreeRefutation, resolve_node

    def build(sx):
        if not isinstance(sx, list):
            raise FormatError(f"expected a list, got {sx[0]!r}", sx[1], path)
        if sx and not isinstance(sx[0], list) and sx[0][0] == "res":
            if len(sx) != 4:
                raise FormatError("expected (res <var> POS NEG)", sx[0][1], path)
            try:
                pivot = int(sx[1][0])
            except (ValueError, TypeError):
                raise FormatError("pivot must be an integer", sx[0][1], path) from None
            try:
                return resolve_node(pivot, build(sx[2]), build(sx[3]))
            except TreeError as e:
                raise FormatError(str(e), sx[0][1], path) from None
        lits = []
        for t in sx:
            if isinstance(t, list):
                raise FormatError("nested list inside a leaf", None, path)
            try:
                lits.append(int(t[0]))
            except ValueError:
                raise FormatError(f"bad literal {t[0]!r}", t[1], path) from None
        return Leaf(Clause(lits))

    try:
        return TreeRefutation(formula, build(parse_sexp(text, path)))
    except TreeError as e:
        raise FormatError(str(e), None, path) from None


def read_tree(path, formula: ClauseMultiset):
    return parse_tree(Path(path).read_text(), formula, path)


def format_tree(node) -> str:
    from .treeres import Leaf

    if isinstance(node, Leaf):
        return "(" + " ".join(map(str, node.clause.lits)) + ")"
    return f"(res {node.pivot} {format_tree(node.pos)} {format_tree(node.neg)})"
