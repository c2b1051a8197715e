"""Command-line entry point.

Subcommands: validate, expand, act, enumerate, rank, solve, cg, witt,
selfcheck.  Every subcommand exits 0 exactly when no violation, failure or
inconsistency was found.  ``--format structured`` switches reports to a
stable line-oriented ``key value`` serialization for CI.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import hall, linsolve, relation_io, wigner
from .algebra import REGISTRY, act as algebra_act, expand, grade, leaf_count, parity, spin
from .exactnum import RAD_ZERO, RadNum
from .parsing import ParseError, parse_term, parse_tree

THREADS_ENV = "BRACKETALG_THREADS"


def _default_threads():
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _build_parser():
    top = argparse.ArgumentParser(
        prog="bracketalg",
        description="Exact so(3)-covariant bracket calculus: validate the "
                    "shipped relation corpus, expand coupled bracket trees, "
                    "enumerate and rank monomials, and solve exact sparse "
                    "linear systems.")
    top.add_argument("--format", choices=("human", "structured"),
                     default="human", help="report style (default: human)")
    top.add_argument("--threads", type=int, default=_default_threads(),
                     help="worker thread count (results are scheduling-"
                          "independent; env %s)" % THREADS_ENV)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="structural + covariance checks on a relation file")
    p.add_argument("file", help="relation file path")
    p.add_argument("--no-covariance", action="store_true",
                   help="skip the per-term annihilation check")

    p = sub.add_parser("expand", help="expand a tree (or scalar*tree term) into words")
    p.add_argument("expression")
    p.add_argument("--m", type=int, default=None,
                   help="multiplet component (default: top component m = spin)")

    p = sub.add_parser("act", help="apply J3/Jplus/Jminus to an expanded tree")
    p.add_argument("op", choices=("J3", "Jplus", "Jminus"))
    p.add_argument("expression")
    p.add_argument("--m", type=int, default=None)

    p = sub.add_parser("enumerate", help="all valid trees in a grade/spin/parity slice")
    p.add_argument("--grade", type=int, required=True)
    p.add_argument("--spin", type=int, required=True)
    p.add_argument("--parity", choices=("+", "-", "+1", "-1", "1"), required=True)
    p.add_argument("--max-leaves", type=int, required=True)
    p.add_argument("--alphabet", default="T2,S2,S1,J1",
                   help="comma-separated generator names (default: T2,S2,S1,J1)")
    p.add_argument("--pure-commutators", action="store_true")

    p = sub.add_parser("rank", help="free-envelope rank of the trees in a relation file")
    p.add_argument("--file", required=True)

    p = sub.add_parser("solve", help="exact sparse solve / rank / nullspace of a matrix file")
    p.add_argument("file")
    p.add_argument("--task", choices=("solve", "rank", "nullspace"), default="solve")
    p.add_argument("--oracle", choices=("dense",), default=None,
                   help="cross-check the sparse result against dense elimination")

    p = sub.add_parser("cg", help="exact Clebsch-Gordan coefficients")
    p.add_argument("spins", type=int, nargs="+",
                   help="either `j1 m1 j2 m2 j m` for one coefficient "
                        "or `j1 j2` for the full table")

    p = sub.add_parser("witt", help="free-Lie-algebra dimension (Witt formula)")
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)

    sub.add_parser("selfcheck", help="run the built-in property suite")
    return top


def _parity_value(text):
    return -1 if text == "-" else 1


def _print_wordpoly(w):
    print(w.dump() if w.terms else "0")


def _cmd_validate(args):
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    corpus = relation_io.parse(text)
    report = relation_io.validate(corpus)
    print(report.render(structured=args.format == "structured"))
    ok = report.ok
    if not args.no_covariance:
        cov = relation_io.covariance_check(corpus)
        print(cov.render(structured=args.format == "structured"))
        ok = ok and cov.ok
    return 0 if ok else 1


def _cmd_expand(args):
    coeff, tree = parse_term(args.expression)
    m = spin(tree) if args.m is None else args.m
    w = expand(tree, m).scale(coeff)
    _print_wordpoly(w)
    return 0


def _cmd_act(args):
    coeff, tree = parse_term(args.expression)
    m = spin(tree) if args.m is None else args.m
    w = algebra_act(args.op, expand(tree, m).scale(coeff))
    _print_wordpoly(w)
    return 0


def _cmd_enumerate(args):
    slc = hall.SpinParitySlice(args.grade, args.spin,
                               _parity_value(args.parity),
                               tuple(args.alphabet.split(",")))
    trees = hall.enumerate_trees(slc, args.max_leaves,
                                 pure_commutators=args.pure_commutators)
    for t in trees:
        print(t)
    if args.format == "structured":
        print("count %d" % len(trees))
    return 0


def _read_tree_lines(path):
    trees = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            _, tree = parse_term(line)
            trees.append(tree)
    return trees


def _cmd_rank(args):
    trees = _read_tree_lines(args.file)
    r, chosen = hall.rank_select(trees)
    if args.format == "structured":
        print("free_envelope_rank %d" % r)
        for t in chosen:
            print("independent %s" % t)
    else:
        print("free-envelope rank: %d of %d candidates" % (r, len(trees)))
        for t in chosen:
            print("  %s" % t)
    return 0


def _cmd_solve(args):
    with open(args.file, encoding="utf-8") as fh:
        system = linsolve.parse_matrix(fh.read())
    if args.task == "rank":
        r = linsolve.rank(system)
        if args.oracle == "dense":
            dr = linsolve.dense_rank(linsolve.to_dense(system))
            if dr != r:
                print("oracle mismatch: sparse %d vs dense %d" % (r, dr),
                      file=sys.stderr)
                return 1
        print("rank %d" % r)
        return 0
    if args.task == "nullspace":
        basis = linsolve.nullspace(system)
        print("nullity %d" % len(basis))
        for vec in basis:
            print(" ".join(str(v) for v in vec))
        return 0
    result = linsolve.solve(system)
    if args.oracle == "dense":
        dr = linsolve.dense_rank(linsolve.to_dense(system))
        if dr != result.rank:
            print("oracle mismatch: sparse rank %d vs dense %d"
                  % (result.rank, dr), file=sys.stderr)
            return 1
    if result.status == "unique":
        for c, v in enumerate(result.solution):
            print("x%d = %s" % (c, v))
        return 0
    if result.status == "underdetermined":
        print("underdetermined: free columns %s" % result.free_cols)
    else:
        print("inconsistent at row %d" % result.inconsistent_row)
    return 1


def _cmd_cg(args):
    vals = args.spins
    if len(vals) == 6:
        j1, m1, j2, m2, j, m = vals
        print(wigner.cg(j1, m1, j2, m2, j, m))
        return 0
    if len(vals) == 2:
        j1, j2 = vals
        table = wigner.cg_table(j1, j2)
        for key in sorted(table):
            print("%d %d %d %d %d %d -> %s"
                  % (key.j1, key.m1, key.j2, key.m2, key.j, key.m, table[key]))
        return 0
    print("cg takes 6 arguments (j1 m1 j2 m2 j m) or 2 (j1 j2)",
          file=sys.stderr)
    return 2


def _cmd_witt(args):
    print(hall.witt(args.k, args.n))
    return 0


def _selfcheck_cg():
    for j1, j2 in ((1, 1), (2, 1), (2, 2)):
        racah = wigner.cg_table(j1, j2)
        ladder = wigner.cg_table_ladder(j1, j2)
        if racah != ladder:
            return False
        # orthogonality: sum over m1, m2 of C(j,m)C(j',m') = delta
        for j in range(abs(j1 - j2), j1 + j2 + 1):
            for jp in range(abs(j1 - j2), j1 + j2 + 1):
                for m in range(-min(j, jp), min(j, jp) + 1):
                    total = RAD_ZERO
                    for m1 in range(-j1, j1 + 1):
                        m2 = m - m1
                        if abs(m2) > j2:
                            continue
                        total = total + wigner.cg(j1, m1, j2, m2, j, m) \
                            * wigner.cg(j1, m1, j2, m2, jp, m)
                    expected = RAD_ZERO if j != jp else RadNum.rational(1)
                    if total != expected:
                        return False
    return True


def _selfcheck_solver():
    import random
    rng = random.Random(20260826)
    for _ in range(5):
        n = 8
        entries = {}
        for r in range(n):
            for c in range(n):
                if rng.random() < 0.4:
                    entries[(r, c)] = Fraction(rng.randint(-4, 4))
        system = linsolve.SparseSystem(n, n, entries)
        if linsolve.rank(system) != linsolve.dense_rank(linsolve.to_dense(system)):
            return False
    return True


def _cmd_selfcheck(args):
    corpus = relation_io.load_corpus()
    checks = [
        ("cg orthogonality and ladder agreement", _selfcheck_cg()),
        ("corpus structural validation", relation_io.validate(corpus).ok),
        ("corpus grading homogeneity",
         all(grade(t.tree) in relation_io.EXPECTED_GRADES for t in corpus.terms)),
        ("corpus covariance", relation_io.covariance_check(corpus).ok),
        ("sparse/dense solver agreement", _selfcheck_solver()),
    ]
    ok = True
    for name, passed in checks:
        ok = ok and passed
        if args.format == "structured":
            print("check %s %s" % (name.replace(" ", "_"), "ok" if passed else "FAIL"))
        else:
            print("%-40s %s" % (name, "ok" if passed else "FAIL"))
    return 0 if ok else 1


_DISPATCH = {
    "validate": _cmd_validate,
    "expand": _cmd_expand,
    "act": _cmd_act,
    "enumerate": _cmd_enumerate,
    "rank": _cmd_rank,
    "solve": _cmd_solve,
    "cg": _cmd_cg,
    "witt": _cmd_witt,
    "selfcheck": _cmd_selfcheck,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except (ParseError, relation_io.CorpusInvariantError,
            linsolve.ParameterInMatrixError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
