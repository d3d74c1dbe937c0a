"""Command-line front end: evaluate models on graphs and run every lab
experiment with machine-readable TSV or JSON output.

Exit codes: 0 all checks pass, 1 an exact assertion failed, 2 malformed
input, 3 a combinatorial guard was exceeded.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction

from vertexlab.errors import GuardExceeded
from vertexlab.exactalg import GaussianRational, rank
from vertexlab.graphs import (
    Fragment,
    MultiGraph,
    Permutation,
    graph_from_json,
    graph_to_json,
)
from vertexlab.lab import (
    CheckRow,
    Report,
    antisym_kernel_check,
    connection_matrix,
    criterion_check,
    criterion_random_report,
    enumerate_fragments,
    glue_identity_check,
    partition_oracle,
    rank_bound_check,
)
from vertexlab.models import (
    fragment_tensor,
    matchings_model,
    model_from_json,
    ones_model,
    parity_model,
    partition_function,
    partition_function_contracted,
)
from vertexlab.symgroup import (
    char_sum_lhs,
    char_sum_rhs,
    m_matrix,
    m_rank_formula,
    partitions_of,
)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from None


def _load_model(path: str):
    return model_from_json(_load_json(path))


def _load_graph(path: str):
    obj = graph_from_json(_load_json(path))
    if isinstance(obj, Fragment):
        if obj.arity != 0:
            raise ValueError(f"{path}: expected a plain graph, got a fragment")
        return obj.graph
    return obj


def _load_fragment(path: str) -> Fragment:
    obj = graph_from_json(_load_json(path))
    if not isinstance(obj, Fragment):
        raise ValueError(f"{path}: expected a fragment (needs a labels field)")
    return obj


def _parse_rational(text: str) -> GaussianRational:
    try:
        return GaussianRational(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not an exact rational: {text!r}") from None


def _emit_report(report: Report, fmt: str) -> int:
    if fmt == "json":
        print(json.dumps(report.to_json_dict(), sort_keys=True))
    else:
        print(report.to_tsv())
    failure = report.first_failure()
    if failure is not None:
        print(f"FAILED: {failure.tsv()}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_eval(args) -> int:
    y = _load_model(args.model)
    g = _load_graph(args.graph)
    if args.method == "brute":
        value = partition_function(y, g)
    else:
        value = partition_function_contracted(
            y, g, frontier_guard=args.frontier_guard
        )
    print(value)
    return 0


def cmd_tensor(args) -> int:
    y = _load_model(args.model)
    frag = _load_fragment(args.fragment)
    t = fragment_tensor(y, frag)
    colorings = list(itertools.product(range(1, t.colors + 1), repeat=t.arity))
    if args.format == "json":
        print(
            json.dumps(
                {
                    "colors": t.colors,
                    "arity": t.arity,
                    "entries": [
                        {"coloring": list(phi), "value": str(v)}
                        for phi, v in zip(colorings, t.entries)
                    ],
                },
                sort_keys=True,
            )
        )
    else:
        for phi, v in zip(colorings, t.entries):
            print(f"{','.join(str(c) for c in phi)}\t{v}")
    return 0


def cmd_connmat(args) -> int:
    y = _load_model(args.model)
    cat = enumerate_fragments(args.k, args.catalog_vertices, args.catalog_edges)
    c = connection_matrix(partition_oracle(y, args.frontier_guard), cat)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "size": c.rows,
                    "rows": [[str(e) for e in c.row(i)] for i in range(c.rows)],
                },
                sort_keys=True,
            )
        )
    else:
        for i in range(c.rows):
            print("\t".join(str(e) for e in c.row(i)))
    return 0


def cmd_rank(args) -> int:
    y = _load_model(args.model)
    cat = enumerate_fragments(args.k, args.catalog_vertices, args.catalog_edges)
    report = rank_bound_check(y, args.k, cat, frontier_guard=args.frontier_guard)
    return _emit_report(report, args.format)


def cmd_mnd(args) -> int:
    ds = [_parse_rational(part) for part in args.dlist.split(",") if part.strip()]
    if not ds:
        raise ValueError("empty d list")
    rows = []
    ok = True
    for d in ds:
        computed = rank(
            m_matrix(args.n, d, guard=args.max_permutation_degree)
        )
        formula = m_rank_formula(args.n, d)
        match = computed == formula
        ok = ok and match
        rows.append((str(d), computed, formula, match))
    if args.format == "json":
        print(
            json.dumps(
                {
                    "n": args.n,
                    "rows": [
                        {
                            "d": d,
                            "computed": c,
                            "formula": f,
                            "match": m,
                        }
                        for d, c, f, m in rows
                    ],
                },
                sort_keys=True,
            )
        )
    else:
        for d, c, f, m in rows:
            print(f"{d}\t{c}\t{f}\t{'ok' if m else 'fail'}")
    if not ok:
        first = next(r for r in rows if not r[3])
        print(f"FAILED: mnd n={args.n} d={first[0]}", file=sys.stderr)
        return 1
    return 0


def cmd_charsum(args) -> int:
    rows = []
    ok = True
    for lam in partitions_of(args.n):
        lhs = char_sum_lhs(lam)
        rhs = char_sum_rhs(lam)
        match = lhs == rhs
        ok = ok and match
        rows.append((str(lam), str(lhs), str(rhs), match))
    if args.format == "json":
        print(
            json.dumps(
                {
                    "n": args.n,
                    "rows": [
                        {"partition": p, "lhs": l, "rhs": r, "match": m}
                        for p, l, r, m in rows
                    ],
                },
                sort_keys=True,
            )
        )
    else:
        for p, l, r, m in rows:
            print(f"{p}\t{l}\t{r}\t{'ok' if m else 'fail'}")
    if not ok:
        print(f"FAILED: charsum n={args.n}", file=sys.stderr)
        return 1
    return 0


def cmd_criterion(args) -> int:
    y = _load_model(args.model)
    if args.graph is not None:
        if args.pins is None:
            raise ValueError("--pins is required with --graph")
        g = _load_graph(args.graph)
        u_set = []
        s = {}
        for part in args.pins.split(","):
            if not part.strip():
                continue
            try:
                u_txt, t_txt = part.split(":")
                u, t = int(u_txt), int(t_txt)
            except ValueError:
                raise ValueError(f"bad pin {part!r}, want u:s(u)") from None
            u_set.append(u)
            s[u] = t
        value = criterion_check(y, g, u_set, s)
        vanish_expected = len(u_set) >= y.colors + 1
        row = CheckRow(
            "criterion",
            f"n={y.colors} U={u_set} s={[s[u] for u in u_set]}",
            str(value),
            "0" if vanish_expected else "?",
            (value == GaussianRational(0)) or not vanish_expected,
        )
        return _emit_report(Report([row]), args.format)
    report = criterion_random_report(
        y,
        instances=args.instances,
        seed=args.seed,
        u_size=args.u_size,
        max_vertices=args.max_vertices,
        max_edges=args.max_edges,
    )
    return _emit_report(report, args.format)


def cmd_glueid(args) -> int:
    y = _load_model(args.model)
    x = _load_fragment(args.x)
    if args.m > args.max_permutation_degree:
        raise GuardExceeded(
            f"m={args.m} exceeds --max-permutation-degree {args.max_permutation_degree}"
        )
    report = Report([])
    for rho in Permutation.all_of_degree(args.m):
        for sigma in Permutation.all_of_degree(args.m):
            report = report + glue_identity_check(y, x, args.m, rho, sigma)
    return _emit_report(report, args.format)


def cmd_kernelq(args) -> int:
    if args.model is not None:
        y = _load_model(args.model)
    elif args.n == 1:
        y = parity_model(16)
    elif args.n == 2:
        y = matchings_model(16)
    elif args.n is not None:
        y = ones_model(args.n, 16)
    else:
        raise ValueError("kernelq needs --n or --model")
    k = y.colors + 1
    if k > args.max_permutation_degree:
        raise GuardExceeded(
            f"k={k} exceeds --max-permutation-degree {args.max_permutation_degree}"
        )
    edges = args.catalog_edges if args.catalog_edges is not None else 2 * k + 2
    cat = enumerate_fragments(2 * k, args.catalog_vertices, edges)
    report = antisym_kernel_check(y, cat)
    return _emit_report(report, args.format)


def cmd_catalog(args) -> int:
    cat = enumerate_fragments(args.k, args.catalog_vertices, args.catalog_edges)
    if args.format == "json":
        print(
            json.dumps(
                {
                    "arity": cat.arity,
                    "max_unlabeled": cat.max_unlabeled,
                    "max_edges": cat.max_edges,
                    "items": [graph_to_json(f) for f in cat],
                },
                sort_keys=True,
            )
        )
    else:
        for idx, f in enumerate(cat):
            edges = ";".join(f"{u}-{v}" for u, v in f.edges)
            print(f"{idx}\t{f.vertex_count}\t{f.free_loops}\t{edges}")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("tsv", "json"), default="tsv", help="output format"
    )
    common.add_argument(
        "--seed", type=int, default=0, help="seed for randomized instances"
    )
    common.add_argument(
        "--max-permutation-degree",
        type=int,
        default=5,
        help="cap on symmetric-group degree in matrix experiments",
    )
    common.add_argument(
        "--frontier-guard",
        type=int,
        default=20,
        help="cut-edge limit for contracted evaluation",
    )

    parser = argparse.ArgumentParser(
        prog="vertexlab",
        description="exact vertex-model partition functions and connection-matrix experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate p_y on a graph")
    p.add_argument("model")
    p.add_argument("graph")
    p.add_argument("--method", choices=("contracted", "brute"), default="contracted")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tensor", parents=[common], help="boundary tensor of a fragment")
    p.add_argument("model")
    p.add_argument("fragment")
    p.set_defaults(func=cmd_tensor)

    p = sub.add_parser("connmat", parents=[common], help="connection matrix over a catalog")
    p.add_argument("model")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--catalog-vertices", type=int, default=2)
    p.add_argument("--catalog-edges", type=int, default=4)
    p.set_defaults(func=cmd_connmat)

    p = sub.add_parser("rank", parents=[common], help="rank bound and Gram identity")
    p.add_argument("--model", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--catalog-vertices", type=int, default=2)
    p.add_argument("--catalog-edges", type=int, default=4)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("mnd", parents=[common], help="rank of M_n(d) vs the formula")
    p.add_argument("n", type=int)
    p.add_argument("dlist", help="comma-separated exact rationals")
    p.set_defaults(func=cmd_mnd)

    p = sub.add_parser("charsum", parents=[common], help="character sum polynomial identity")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_charsum)

    p = sub.add_parser("criterion", parents=[common], help="signed pinning-sum criterion")
    p.add_argument("--model", required=True)
    p.add_argument("--graph", help="explicit graph JSON (else randomized)")
    p.add_argument("--pins", help="explicit pins u:s(u),v:s(v),... for --graph")
    p.add_argument("--instances", type=int, default=50)
    p.add_argument("--u-size", type=int, default=None)
    p.add_argument("--max-vertices", type=int, default=5)
    p.add_argument("--max-edges", type=int, default=4)
    p.set_defaults(func=cmd_criterion)

    p = sub.add_parser("glueid", parents=[common], help="tensor-power gluing identity")
    p.add_argument("--model", required=True)
    p.add_argument("--x", required=True, help="fragment JSON of even arity")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_glueid)

    p = sub.add_parser("kernelq", parents=[common], help="antisymmetrizer kernel membership")
    p.add_argument("--n", type=int, default=None, help="color count (built-in model)")
    p.add_argument("--model", help="model JSON (overrides --n)")
    p.add_argument("--catalog-vertices", type=int, default=2)
    p.add_argument("--catalog-edges", type=int, default=None)
    p.set_defaults(func=cmd_kernelq)

    p = sub.add_parser("catalog", parents=[common], help="enumerate a fragment catalog")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--catalog-vertices", type=int, default=2)
    p.add_argument("--catalog-edges", type=int, default=4)
    p.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GuardExceeded as exc:
        print(f"guard violation: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
