import itertools

import pytest

from maxreskit.core import Assignment, ClauseMultiset

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number, title, ok, detail=""):
        line = f"[criterion {number:2d}] {'PASS' if ok else 'FAIL'}  {title}  ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


def brute_viol(F: ClauseMultiset, values):
    """Reference viol: plain loops, no tables."""
    n = 0
    for c in F:
        sat = False
        for l in c.lits:
            if values[abs(l) - 1] == (1 if l > 0 else 0):
                sat = True
        n += not sat
    return n


def brute_satisfiable(F: ClauseMultiset):
    for values in itertools.product((0, 1), repeat=F.num_vars):
        if brute_viol(F, values) == 0:
            return values
    return None


def all_values(n):
    return [Assignment.from_values(v) for v in itertools.product((0, 1), repeat=n)]
