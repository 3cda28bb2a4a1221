"""Command-line entry point: maxreskit {generate,witness,check,simulate-treeres,oracle,report}."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import families as fam
from .core import Verdict
from .formats import (
    FormatError,
    format_cubes,
    format_dimacs,
    format_proof_log,
    read_cubes,
    read_dimacs,
    read_proof_log,
    read_tree,
    relpath,
)
from .maxres import DEFAULT_EXHAUSTIVE_LIMIT, check_viol_invariant, replay
from .subcubesums import CertificateError, ScsCertificate, check_certificate

ENV_PREFIX = "MAXRESKIT_"
EXIT_PASS, EXIT_FAIL, EXIT_MALFORMED = 0, 1, 2


class UsageError(Exception):
    pass


def parse_range(text: str) -> list:
    """'1..5' -> [1,2,3,4,5]; '1,3,4' -> [1,3,4]."""
    if ".." in text:
        a, b = text.split("..", 1)
        return list(range(int(a), int(b) + 1))
    return [int(t) for t in text.split(",") if t]


def _env(name, default, cast=str):
    v = os.environ.get(ENV_PREFIX + name)
    return cast(v) if v is not None else default


# --- formula construction -----------------------------------------------------

def build_graph(args) -> fam.ChargedGraph:
    kind = args.graph
    if kind == "triangle":
        g = fam.triangle()
    elif kind in ("k4", "complete"):
        g = fam.complete_graph(4 if kind == "k4" else args.n)
    elif kind == "cycle":
        g = fam.cycle_graph(args.n)
    elif kind == "regular":
        g = fam.random_regular_graph(args.degree, args.n, args.seed)
    else:
        raise UsageError(f"unknown graph {kind!r}")
    if args.charge:
        bits = [int(c) for c in args.charge]
        g = fam.ChargedGraph(g.num_vertices, g.edges, bits)
    return g


def build_formula(family, args):
    """Returns (formula, header comments)."""
    header = [f"family {family}"]
    if family == "php":
        F = fam.php(args.m)
        header.append(f"m {args.m}")
    elif family == "php-delta":
        F = fam.php_delta(args.m)
        header.append(f"m {args.m}")
    elif family == "tseitin":
        g = build_graph(args)
        F = fam.tseitin(g)
        header += [f"graph {args.graph}", f"edges {g.edges}", "charge " + "".join(map(str, g.charge))]
        if args.graph == "regular":
            header.append(f"seed {args.seed}")
    elif family in ("pebbling", "pebhint", "pebhint-or", "pebhint-xor"):
        g = fam.pyramid(args.height)
        F = fam.pebbling(g, hints=family != "pebbling")
        if family.endswith("-or"):
            F = fam.compose(F, "or")
        elif family.endswith("-xor"):
            F = fam.compose(F, "xor")
        header.append(f"pyramid height {args.height}")
    elif family == "subset-cardinality":
        g = fam.random_regular_bipartite(args.n, args.seed)
        F = fam.subset_cardinality(g)
        header += [f"n {args.n}", f"seed {args.seed}"]
    else:
        raise UsageError(f"unknown family {family!r}")
    return F, header


FAMILIES = ["php", "php-delta", "tseitin", "pebbling", "pebhint", "pebhint-or", "pebhint-xor",
            "subset-cardinality"]


def _add_family_params(p):
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--graph", default="triangle", help="triangle, k4, complete, cycle or regular")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--degree", type=int, default=3)
    p.add_argument("--charge", default=None, help="charge bits, e.g. 111")
    p.add_argument("--height", type=int, default=2)


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# --- commands ---------------------------------------------------------------

def cmd_generate(args):
    F, header = build_formula(args.family, args)
    _write(format_dimacs(F, header), args.out)
    return EXIT_PASS


def cmd_witness(args):
    from . import witnesses as W

    if args.kind == "subset-table":
        _write(W.table_latex(), args.out)
        return EXIT_PASS
    if args.out in (None, "-"):
        raise UsageError("witness needs --out (the formula is written next to it)")
    out = Path(args.out)
    cnf = out.with_suffix(".cnf")
    if args.kind == "php-scs":
        cert = W.php_scs_proof(args.m)
        header = ["family php", f"m {args.m}"]
    elif args.kind == "subsetcard-scs":
        cert = W.subsetcard_scs_proof(fam.random_regular_bipartite(args.n, args.seed))
        header = ["family subset-cardinality", f"n {args.n}", f"seed {args.seed}"]
    elif args.kind == "pebhint-or":
        log = W.pebhint_or_maxres_proof(args.height)
        cnf.write_text(format_dimacs(log.initial, ["family pebhint-or", f"pyramid height {args.height}"]))
        out.write_text(format_proof_log(log, relpath(cnf, out), [f"maxres refutation, {len(log)} steps"]))
        print(json.dumps({"proof": str(out), "formula": str(cnf), "steps": len(log)}))
        return EXIT_PASS
    else:
        raise UsageError(f"unknown witness {args.kind!r}")
    cnf.write_text(format_dimacs(cert.formula, header))
    out.write_text(format_cubes(cert.cubes, relpath(cnf, out), [f"size {cert.size} width {cert.width}"]))
    print(json.dumps({"certificate": str(out), "formula": str(cnf), "size": cert.size, "width": cert.width}))
    return EXIT_PASS


def _verdict_exit(v: Verdict, extra=None):
    d = v.to_dict()
    if extra:
        d.update(extra)
    print(json.dumps(d))
    return EXIT_PASS if v.passed else EXIT_FAIL


def cmd_check(args):
    mode = args.mode
    if args.kind == "scs":
        G, fpath = read_cubes(args.proof)
        if args.formula:
            F = read_dimacs(args.formula)
        elif fpath:
            F = read_dimacs(Path(args.proof).parent / fpath)
        else:
            raise FormatError("no formula given and certificate has no 'c formula' header", None, args.proof)
        try:
            cert = ScsCertificate(F, G)
        except CertificateError as e:
            raise FormatError(str(e), None, args.proof) from None
        v = check_certificate(cert, mode=mode, samples=args.samples, seed=args.seed,
                              limit=args.exhaustive_limit)
        return _verdict_exit(v, {"size": cert.size, "width": cert.width})
    # maxres
    formula = read_dimacs(args.formula) if args.formula else None
    log, _ = read_proof_log(args.proof, formula)
    inv_mode = "exhaustive" if mode in ("exhaustive", "auto") else "sampled"
    v = check_viol_invariant(log, mode=inv_mode, samples=args.samples, seed=args.seed,
                             limit=args.exhaustive_limit)
    if not v.passed:
        return _verdict_exit(v)
    res = replay(log)
    if not res.refuted:
        v = Verdict(False, v.mode, detail="final multiset has no empty clause")
    return _verdict_exit(v, {"steps": res.steps, "refuted": res.refuted})


def cmd_simulate_treeres(args):
    from .treeres import simulate_treeres

    F = read_dimacs(args.formula)
    tree = read_tree(args.tree, F)
    log = simulate_treeres(tree)
    weakenings = sum(1 for s in log.steps if s.kind == "weaken")
    if args.out in (None, "-"):
        _write(format_proof_log(log, args.formula), None)
    else:
        Path(args.out).write_text(format_proof_log(log, relpath(args.formula, args.out)))
    info = {"tree_size": tree.size, "steps": len(log), "weakenings": weakenings,
            "bound": 2 * tree.size, "within_bound": len(log) <= 2 * tree.size}
    print(json.dumps(info), file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_PASS


def cmd_oracle(args):
    from . import oracles as O

    name = args.name
    if name == "bpeb":
        g = fam.pyramid(args.pyramid)
        P = parse_range(args.pebbled) if args.pebbled else []
        w = args.target if args.target is not None else g.sink
        out = {"value": O.bpeb(g, P, w)}
    elif name == "intermediate":
        checked, bad = O.intermediate_inequality_sweep(fam.pyramid(args.pyramid))
        out = {"checked": checked, "violations": bad}
    elif name == "width":
        F = read_dimacs(args.formula) if args.formula else build_formula(args.family, args)[0]
        out = {"value": O.min_res_width(F)}
    elif name == "degree":
        F = read_dimacs(args.formula) if args.formula else build_formula(args.family, args)[0]
        out = O.scs_min_degree(F, node_limit=args.node_limit, time_limit=args.time_limit).to_dict()
    elif name == "census":
        out = O.tseitin_level_census(build_graph(args)).to_dict()
    elif name == "game":
        from .treeres import dpll_tree_family

        g = fam.pyramid(args.height)
        F = fam.compose(fam.pebhint(g), "or")
        oracle = O.PebbleOracle(g)
        rows = []
        for t in dpll_tree_family(F, num_random=args.trees, seed=args.seed, max_nodes=args.node_cap):
            tr = O.prover_delayer_play(F, O.TreeProver(t), O.pebbling_delayer(g, oracle))
            rows.append({"tree_size": t.size, "points": tr.points})
        out = {"trees": len(rows), "min_points": min(r["points"] for r in rows) if rows else None,
               "size_bound_holds": all(r["tree_size"] >= 2 ** r["points"] for r in rows), "plays": rows}
    else:
        raise UsageError(f"unknown oracle {name!r}")
    print(json.dumps(out))
    return EXIT_PASS


# report rows are computed by top-level functions so they can run in a process pool

def _row_pebhint_or(h):
    from .witnesses import pebhint_or_maxres_proof

    log = pebhint_or_maxres_proof(h)
    v = check_viol_invariant(log)
    nv = (h + 1) * (h + 2) // 2
    return {"h": h, "vertices": nv, "steps": len(log), "steps_per_vertex": round(len(log) / nv, 4),
            "refuted": replay(log).refuted, "invariant": v.passed}


def _row_census(spec):
    from .oracles import tseitin_level_census

    name, g = spec
    c = tseitin_level_census(g)
    return {"graph": name, "vertices": g.num_vertices, "edges": g.num_edges,
            "levels": " ".join(f"{k}:{v}" for k, v in sorted(c.counts.items())),
            "all_odd": c.all_odd, "closed_form": c.matches}


def _row_php(m):
    from .witnesses import php_scs_proof

    cert = php_scs_proof(m)
    v = check_certificate(cert, mode="auto")
    return {"m": m, "vars": cert.formula.num_vars, "clauses": len(cert.formula),
            "cubes": cert.size, "width": cert.width, "pass": v.passed, "mode": v.mode}


def linear_fit(xs, ys):
    """Least-squares y = a*x + b with R^2."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    a, b = np.polyfit(x, y, 1)
    pred = a * x + b
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    return float(a), float(b), 1.0 - ss_res / ss_tot if ss_tot else 1.0


def cmd_report(args):
    if args.name == "pebhint-or-size":
        work, fn = parse_range(args.heights), _row_pebhint_or
    elif args.name == "census":
        work = [("triangle", fam.triangle()), ("k4", fam.complete_graph(4)),
                ("regular3-8", fam.random_regular_graph(3, 8, args.seed))]
        fn = _row_census
    elif args.name == "php-scs":
        work, fn = parse_range(args.ms), _row_php
    else:
        raise UsageError(f"unknown report {args.name!r}")
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(fn, work))
    else:
        rows = [fn(w) for w in work]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _write(buf.getvalue(), args.out)
    if args.name == "pebhint-or-size" and len(rows) >= 2:
        a, b, r2 = linear_fit([r["vertices"] for r in rows], [r["steps"] for r in rows])
        print(json.dumps({"slope": a, "intercept": b, "r2": r2}), file=sys.stderr)
    return EXIT_PASS


# --- parser -----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--exhaustive-limit", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="maxreskit", description=__doc__)
    p.add_argument("--jobs", type=int, default=_env("JOBS", 1, int))
    p.add_argument("--seed", type=int, default=_env("SEED", 0, int))
    p.add_argument("--exhaustive-limit", type=int, default=_env("EXHAUSTIVE_LIMIT", DEFAULT_EXHAUSTIVE_LIMIT, int))
    p.add_argument("--out", default=_env("OUT", None))
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", parents=[common], help="write a formula family as DIMACS")
    g.add_argument("family", choices=FAMILIES)
    _add_family_params(g)
    g.set_defaults(func=cmd_generate)

    w = sub.add_parser("witness", parents=[common], help="emit an explicit certificate or proof log")
    w.add_argument("kind", choices=["php-scs", "subsetcard-scs", "pebhint-or", "subset-table"])
    _add_family_params(w)
    w.set_defaults(func=cmd_witness)

    c = sub.add_parser("check", parents=[common], help="check a proof log or certificate")
    c.add_argument("kind", choices=["maxres", "scs"])
    c.add_argument("proof")
    c.add_argument("--formula", default=None)
    c.add_argument("--mode", choices=["exhaustive", "sampled", "auto"], default="auto")
    c.add_argument("--samples", type=int, default=10_000)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("simulate-treeres", parents=[common], help="translate a tree refutation to MaxResW")
    s.add_argument("tree")
    s.add_argument("--formula", required=True)
    s.set_defaults(func=cmd_simulate_treeres)

    o = sub.add_parser("oracle", parents=[common], help="run an oracle, JSON result")
    o.add_argument("name", choices=["bpeb", "intermediate", "width", "degree", "census", "game"])
    o.add_argument("--pyramid", type=int, default=2)
    o.add_argument("--pebbled", default=None, help="free-pebble vertices, e.g. 0,1")
    o.add_argument("--target", type=int, default=None)
    o.add_argument("--formula", default=None)
    o.add_argument("--family", default="php", choices=FAMILIES)
    o.add_argument("--node-limit", type=int, default=2000)
    o.add_argument("--time-limit", type=float, default=30.0)
    o.add_argument("--trees", type=int, default=20)
    o.add_argument("--node-cap", type=int, default=None)
    _add_family_params(o)
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("report", parents=[common], help="parameter sweep as CSV")
    r.add_argument("name", choices=["pebhint-or-size", "census", "php-scs"])
    r.add_argument("--heights", default="1..5")
    r.add_argument("--ms", default="1..3")
    r.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, FileNotFoundError) as e:
        print(json.dumps({"error": str(e)}))
        return EXIT_MALFORMED
    except UsageError as e:
        parser.error(str(e))


if __name__ == "__main__":
    sys.exit(main())
