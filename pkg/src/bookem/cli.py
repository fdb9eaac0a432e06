"""Command line entry point: ``bookem <subcommand> ...``.

Exit codes: 0 success, 1 verification failure or nothing found, 2 usage
or input error, 3 budget exhausted (an interval is printed instead of a
value).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import bounds, construct, embedding, graphs, render, solver

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3

PARAM_LABEL = {solver.Param.PN: "pn", solver.Param.PN_LOCAL: "pn_local", solver.Param.PN_UNION: "pn_union"}
TARGET_OF = {"pn": bounds.Target.PN_CLASSIC, "pnl": bounds.Target.PN_LOCAL, "pnu": bounds.Target.PN_UNION}


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(args, text: str) -> None:
    if args.output and args.output != "-":
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_graph(path: str) -> graphs.Graph:
    return graphs.parse_graph(_read(path))


def _load_spine(path: str, n: int) -> embedding.SpineOrder:
    text = _read(path)
    nums = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("spine:"):
            line = line[len("spine:"):]
        elif line.startswith("page"):
            continue
        nums += [int(t) for t in line.split()]
    spine = embedding.SpineOrder(tuple(nums))
    if len(spine) != n:
        raise UsageError(f"spine lists {len(spine)} vertices, graph has {n}")
    return spine


# subcommands --------------------------------------------------------------


def cmd_generate(args) -> int:
    fam = args.family
    if fam == "kn":
        g = graphs.gen_complete(_need(args.n, "--n"))
    elif fam == "knm":
        g = graphs.gen_complete_bipartite(_need(args.a, "--a"), _need(args.b, "--b"))
    elif fam == "stacked":
        g = graphs.gen_stacked_triangulation(_need(args.level, "--level"), cap=args.level_cap)
    elif fam == "ktree":
        g = graphs.gen_k_tree(_need(args.k, "--k"), _need(args.n, "--n"), args.seed)
    elif fam == "path":
        g = graphs.gen_path(_need(args.n, "--n"))
    elif fam == "cycle":
        g = graphs.gen_cycle(_need(args.n, "--n"))
    else:
        raise UsageError(f"unknown family {fam}")
    _emit(args, graphs.serialize_graph(g))
    return EXIT_OK


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required for this family")
    return value


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    emb = embedding.parse_embedding(_read(args.embedding), g)
    cap = None if args.all_witnesses else embedding.DEFAULT_WITNESS_CAP
    report = embedding.verify(emb, witness_cap=cap)
    if args.json:
        _emit(args, json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n")
    else:
        lines = [
            f"book embedding:  {'yes' if report.is_book else 'no'}",
            f"union embedding: {'yes' if report.is_union else 'no'}",
            f"pages:           {report.page_count}",
            f"locality:        {report.locality}",
        ]
        for e, f, p, kind in report.violations:
            lines.append(f"violation: {e[0]}-{e[1]} x {f[0]}-{f[1]} on page {p} ({kind})")
        _emit(args, "\n".join(lines) + "\n")
    ok = True
    if args.expect == "book":
        ok = report.is_book
    elif args.expect == "union":
        ok = report.is_union
    if args.max_locality is not None and report.locality > args.max_locality:
        ok = False
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bound(args) -> int:
    g = _load_graph(args.graph)
    targets = [args.target] if args.target else ["pnl", "pnu", "pn"]
    reports = [bounds.bound_report(g, TARGET_OF[t], args.pn_lower) for t in targets]
    if args.json:
        payload = reports[0].to_dict() if len(reports) == 1 else [r.to_dict() for r in reports]
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return EXIT_OK
    lines = []
    if args.pn_lower is not None:
        lines.append(f"refined local lower bound: {bounds.refined_local_bound(g, args.pn_lower)}")
    for r in reports:
        upper = "?" if r.upper is None else str(r.upper)
        lines.append(f"{r.target.value}: {r.lower} <= value <= {upper}")
        for value, rule, witness in r.provenance:
            lines.append(f"  {value:>4}  {rule:<26} {witness}".rstrip())
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_construct(args) -> int:
    method = args.method
    if method == "kn-zigzag":
        emb = construct.kn_zigzag(_need(args.n, "--n"))
    elif method == "template":
        found = construct.template_search(
            _need(args.n, "--n"), _need(args.locality, "--locality"), args.templates, args.shifts, args.step,
            time_limit=args.timeout,
        )
        if found is None:
            print("no template found", file=sys.stderr)
            return EXIT_FAIL
        emb = found.embedding()
    else:
        if not args.graph:
            raise UsageError(f"method {method} needs a graph file")
        g = _load_graph(args.graph)
        if method == "star-union":
            emb = construct.union_embedding_from_arboricity(g)
        elif method == "star-local":
            emb = construct.local_embedding_from_stars(g)
        elif method == "ktree-colors":
            coloring = construct.ktree_color_partition(g, _need(args.k, "--k"))
            emb = construct.ktree_color_embedding(coloring, g)
        else:
            raise UsageError(f"unknown method {method}")
    _emit(args, embedding.serialize_embedding(emb))
    return EXIT_OK


def cmd_solve(args) -> int:
    g = _load_graph(args.graph)
    param = solver.Param.parse(args.param)
    spine = _load_spine(args.spine, g.n) if args.spine else None
    result = solver.solve(solver.SolveRequest(g, param, spine, args.timeout, args.nodes, args.jobs))
    if args.cert and result.certificate is not None:
        Path(args.cert).write_text(embedding.serialize_embedding(result.certificate), encoding="utf-8")
    label = PARAM_LABEL[param]
    if args.json:
        _emit(args, json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n")
    elif result.exact:
        _emit(args, f"{label} = {result.value}\n")
    else:
        _emit(args, f"{label} in [{result.lower}, {result.upper}] (budget exhausted)\n")
    return EXIT_OK if result.exact else EXIT_BUDGET


def cmd_template(args) -> int:
    found = construct.template_search(
        args.n, args.locality, args.templates, args.shifts, args.step,
        time_limit=args.timeout, node_limit=args.nodes,
    )
    if found is None:
        if args.json:
            _emit(args, json.dumps({"found": False}) + "\n")
        else:
            print("no template found", file=sys.stderr)
        return EXIT_FAIL
    if args.json:
        payload = {
            "found": True,
            "n": found.n,
            "shifts": found.shifts,
            "step": found.step,
            "templates": [[list(e) for e in t] for t in found.templates],
            "chords": [[list(c) for c in t] for t in found.chords],
        }
        _emit(args, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        _emit(args, embedding.serialize_embedding(found.embedding()))
    return EXIT_OK


def cmd_render(args) -> int:
    g = _load_graph(args.graph)
    emb = embedding.parse_embedding(_read(args.embedding), g)
    _emit(args, render.render(emb, render.RenderSpec(width=args.width, height=args.height)))
    return EXIT_OK


# parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-o", "--output", help="write output to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="bookem", description="Classical, local and union page numbers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write a graph file")
    p.add_argument("--family", required=True, choices=["kn", "knm", "stacked", "ktree", "path", "cycle"])
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--level", type=int)
    p.add_argument("--level-cap", type=int, default=graphs.DEFAULT_LEVEL_CAP)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", parents=[common], help="check an embedding")
    p.add_argument("embedding")
    p.add_argument("graph")
    p.add_argument("--expect", choices=["book", "union", "any"], default="any")
    p.add_argument("--max-locality", type=int)
    p.add_argument("--all-witnesses", action="store_true", help="do not cap the violation list")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bound", parents=[common], help="density lower bounds and constructive upper bounds")
    p.add_argument("graph")
    p.add_argument("--pn-lower", type=int, help="known lower bound on the classical page number")
    p.add_argument("--target", choices=["pn", "pnl", "pnu"])
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("construct", parents=[common], help="build an embedding")
    p.add_argument("graph", nargs="?")
    p.add_argument("--method", required=True, choices=["star-union", "star-local", "kn-zigzag", "ktree-colors", "template"])
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--locality", type=int)
    p.add_argument("--templates", type=int, default=1)
    p.add_argument("--shifts", type=int)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--timeout", type=float)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("solve", parents=[common], help="exact pn / pn_local / pn_union")
    p.add_argument("graph")
    p.add_argument("--param", required=True, choices=["pn", "pnl", "pnu"])
    p.add_argument("--spine", help="file with a fixed spine order")
    p.add_argument("--timeout", type=float)
    p.add_argument("--nodes", type=int, help="search node limit")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--cert", help="write the certificate embedding here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("template", parents=[common], help="cyclic template search for K_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--locality", type=int, required=True)
    p.add_argument("--templates", type=int, default=1)
    p.add_argument("--shifts", type=int)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--timeout", type=float)
    p.add_argument("--nodes", type=int)
    p.set_defaults(func=cmd_template)

    p = sub.add_parser("render", parents=[common], help="SVG arc diagram of an embedding")
    p.add_argument("embedding")
    p.add_argument("graph")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.set_defaults(func=cmd_render)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except construct.TemplateSearchTimeout as exc:
        print(f"bookem: search stopped: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, graphs.GraphFormatError, ValueError) as exc:
        print(f"bookem: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
