import json
import subprocess
import sys

import pytest

from maxreskit.cli import linear_fit, main, parse_range
from maxreskit.families import php
from maxreskit.formats import format_tree, read_dimacs
from maxreskit.treeres import pyramid_sample_tree


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_range():
    assert parse_range("1..5") == [1, 2, 3, 4, 5]
    assert parse_range("1,3,4") == [1, 3, 4]


def test_linear_fit_exact():
    a, b, r2 = linear_fit([1, 2, 3], [5, 7, 9])
    assert abs(a - 2) < 1e-9 and abs(b - 3) < 1e-9 and abs(r2 - 1) < 1e-12


def test_generate_php(tmp_path, capsys):
    out = tmp_path / "php2.cnf"
    code, _, _ = run(capsys, "generate", "php", "--m", 2, "--out", out)
    assert code == 0 and read_dimacs(out) == php(2)


@pytest.mark.parametrize("args", [
    ["tseitin", "--graph", "triangle"],
    ["tseitin", "--graph", "regular", "--n", 8, "--degree", 3],
    ["pebhint-or", "--height", 2],
    ["pebhint-xor", "--height", 1],
    ["subset-cardinality", "--n", 4],
    ["php-delta", "--m", 2],
])
def test_generate_families(capsys, args):
    code, out, _ = run(capsys, "generate", *args)
    assert code == 0 and "p cnf" in out


def test_witness_and_check_scs(tmp_path, capsys):
    cert = tmp_path / "php3.cubes"
    code, out, _ = run(capsys, "witness", "php-scs", "--m", 3, "--out", cert)
    assert code == 0 and json.loads(out)["size"] == 27
    code, out, _ = run(capsys, "check", "scs", cert, "--mode", "exhaustive")
    d = json.loads(out)
    assert code == 0 and d["pass"] and d["mode"] == "exhaustive"


def test_check_scs_failure_exit_1(tmp_path, capsys):
    cert = tmp_path / "php2.cubes"
    run(capsys, "witness", "php-scs", "--m", 2, "--out", cert)
    lines = cert.read_text().splitlines()
    # drop one cube and fix the count
    head = [l for l in lines if l.startswith("c")]
    body = [l for l in lines if not l.startswith(("c", "p"))]
    cert.write_text("\n".join(head + [f"p cubes 6 {len(body) - 1}"] + body[1:]) + "\n")
    code, out, _ = run(capsys, "check", "scs", cert)
    d = json.loads(out)
    assert code == 1 and not d["pass"] and d["witness"] is not None


def test_check_sampled_mode(tmp_path, capsys):
    cert = tmp_path / "sc.cubes"
    run(capsys, "witness", "subsetcard-scs", "--n", 4, "--out", cert)
    code, out, _ = run(capsys, "--seed", 7, "check", "scs", cert, "--mode", "sampled", "--samples", 2000)
    d = json.loads(out)
    assert code == 0 and d["mode"] == "sampled" and d["seed"] == 7 and d["samples"] == 2000


def test_witness_and_check_maxres(tmp_path, capsys):
    log = tmp_path / "peb.log"
    code, out, _ = run(capsys, "witness", "pebhint-or", "--height", 2, "--out", log)
    assert code == 0 and json.loads(out)["steps"] == 22
    code, out, _ = run(capsys, "check", "maxres", log)
    d = json.loads(out)
    assert code == 0 and d["pass"] and d["refuted"]


def test_check_maxres_truncated_exit_2(tmp_path, capsys):
    log = tmp_path / "peb.log"
    run(capsys, "witness", "pebhint-or", "--height", 2, "--out", log)
    log.write_text("\n".join(log.read_text().splitlines()[:-3]) + "\n")
    code, out, _ = run(capsys, "check", "maxres", log)
    assert code == 2 and "truncated" in json.loads(out)["error"]


def test_check_maxres_not_refuted_exit_1(tmp_path, capsys):
    log = tmp_path / "peb.log"
    run(capsys, "witness", "pebhint-or", "--height", 1, "--out", log)
    lines = log.read_text().splitlines()
    lines = [l if not l.startswith("steps") else f"steps {int(l.split()[1]) - 1}" for l in lines[:-1]]
    log.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "check", "maxres", log)
    assert code == 1 and not json.loads(out)["pass"]


def test_missing_file_exit_2(tmp_path, capsys):
    code, out, _ = run(capsys, "check", "scs", tmp_path / "nope.cubes")
    assert code == 2


def test_simulate_treeres(tmp_path, capsys):
    t = pyramid_sample_tree()
    cnf = tmp_path / "fig2.cnf"
    from maxreskit.formats import write_dimacs

    write_dimacs(t.formula, cnf)
    tree = tmp_path / "fig2.tree"
    tree.write_text(format_tree(t.root) + "\n")
    out = tmp_path / "fig2.log"
    code, stdout, _ = run(capsys, "simulate-treeres", tree, "--formula", cnf, "--out", out)
    info = json.loads(stdout)
    assert code == 0 and info["within_bound"] and info["weakenings"] == 1
    code, stdout, _ = run(capsys, "check", "maxres", out)
    assert code == 0 and json.loads(stdout)["refuted"]


@pytest.mark.parametrize("argv, key, value", [
    (["oracle", "bpeb", "--pyramid", 3], "value", 4),
    (["oracle", "width", "--family", "php", "--m", 1], "value", 2),
    (["oracle", "census", "--graph", "triangle"], "matches", True),
])
def test_oracle_json(capsys, argv, key, value):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and json.loads(out)[key] == value


def test_oracle_degree(capsys):
    code, out, _ = run(capsys, "oracle", "degree", "--family", "php", "--m", 1)
    d = json.loads(out)
    assert (d["junta_degree"], d["integral_degree"]) == (2, 2) and d["dual_verified"]


def test_oracle_game(capsys):
    code, out, _ = run(capsys, "oracle", "game", "--height", 2, "--trees", 3)
    d = json.loads(out)
    assert code == 0 and d["min_points"] >= 2 and d["size_bound_holds"]


def test_report_pebhint(capsys):
    code, out, err = run(capsys, "report", "pebhint-or-size", "--heights", "1..4")
    rows = out.strip().splitlines()
    assert code == 0 and rows[0].startswith("h,vertices,steps") and len(rows) == 5
    assert json.loads(err.strip())["r2"] > 0.99


def test_report_parallel(capsys):
    code, out, _ = run(capsys, "--jobs", 2, "report", "php-scs", "--ms", "1..2")
    assert code == 0 and len(out.strip().splitlines()) == 3


def test_env_override(monkeypatch, capsys):
    monkeypatch.setenv("MAXRESKIT_SEED", "11")
    from maxreskit.cli import build_parser

    assert build_parser().parse_args(["report", "census"]).seed == 11


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "maxreskit", "oracle", "bpeb", "--pyramid", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["value"] == 3


def test_subset_table_stdout(capsys):
    code, out, _ = run(capsys, "witness", "subset-table")
    assert code == 0 and out.startswith(r"\begin{tabular}")
