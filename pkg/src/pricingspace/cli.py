"""Command-line interface.

Subcommands: validate, count, enumerate, filter, cost, optimum, lint, dead,
stats, corpus, serve. Exit codes: 0 success/valid, 1 findings or invalid
when --strict is given, 2 usage error or parse failure.
"""

from __future__ import annotations

import argparse
import sys
from datetime import date
from pathlib import Path

from . import analysis, engine, filters, jsonio
from .corpus import OPERATIONS, report_json, run_corpus
from .engine import Direction
from .model import Pricing, Subscription
from .parser import Severity, parse_pricing

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.handler(args)
    except filters.FilterError as exc:
        print(f"filter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except engine.PricingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pricingspace",
        description="Analyze machine-readable SaaS pricings (Pricing2Yaml).",
    )
    sub = parser.add_subparsers(title="commands")

    def command(name: str, handler, help_text: str, *, with_file: bool = True):
        p = sub.add_parser(name, help=help_text)
        if with_file:
            p.add_argument("file", type=Path, help="pricing document (.yml)")
        p.add_argument("--format", choices=("table", "json"), default="table")
        p.add_argument("--strict", action="store_true",
                       help="exit 1 when the result has findings or is invalid")
        p.set_defaults(handler=handler)
        return p

    command("validate", _cmd_validate, "check pricing validity")

    p = command("count", _cmd_count, "size of the (filtered) configuration space")
    p.add_argument("--filter", dest="filter_expr", default=None, metavar="EXPR")

    for name, help_text in (("enumerate", "list every valid subscription"),
                            ("filter", "list the subscriptions matching a filter")):
        p = command(name, _cmd_enumerate, help_text)
        p.add_argument("--filter", dest="filter_expr",
                       default=None, required=(name == "filter"), metavar="EXPR")
        p.add_argument("--limit", type=int, default=10000,
                       help="maximum rows to print (default 10000)")

    p = command("cost", _cmd_cost, "cost of one subscription")
    p.add_argument("--plan", default=None)
    p.add_argument("--addon", dest="add_ons", action="append", default=[],
                   metavar="NAME", help="repeat for each selected add-on")

    p = command("optimum", _cmd_optimum, "cheapest/most expensive subscriptions")
    p.add_argument("--filter", dest="filter_expr", default=None, metavar="EXPR")
    p.add_argument("--direction", choices=("min", "max"), default="min")

    p = command("lint", _cmd_lint, "report validity violations and modeling smells")
    p.add_argument("--now", type=date.fromisoformat, default=None,
                   help="reference date for temporal checks (ISO-8601)")

    command("dead", _cmd_dead, "report dead plans/add-ons and duplicate plans")
    command("stats", _cmd_stats, "features/plans/add-ons/configuration-space counts")

    p = command("corpus", _cmd_corpus, "run an operation over a directory of pricings",
                with_file=False)
    p.add_argument("directory", type=Path)
    p.add_argument("--op", choices=OPERATIONS, default="stats")
    p.add_argument("--now", type=date.fromisoformat, default=None)
    p.add_argument("--workers", type=int, default=4)
    p.add_argument("--no-timing", action="store_true",
                   help="omit durationMs fields (stable output)")
    p.add_argument("--figures", type=Path, default=None, metavar="DIR",
                   help="also write report.csv and PNG charts into DIR")

    p = sub.add_parser("serve", help="start the HTTP analysis service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--data-dir", type=Path, default=None)
    p.set_defaults(handler=_cmd_serve)
    return parser


def _load(args) -> Pricing | None:
    try:
        text = args.file.read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None
    result = parse_pricing(text)
    for diagnostic in result.diagnostics:
        if diagnostic.severity is Severity.ERROR or result.pricing is None:
            print(f"{args.file}:{diagnostic.line}:{diagnostic.column}: "
                  f"{diagnostic.severity.value} {diagnostic.code}: {diagnostic.message}",
                  file=sys.stderr)
    return result.pricing


def _emit(args, payload: dict, table_lines: list[str]) -> None:
    if args.format == "json":
        sys.stdout.write(jsonio.dumps(payload))
    else:
        print("\n".join(table_lines))


def _finding_lines(records: list[dict]) -> list[str]:
    return [f"{r['severity']:7} {r['code']:26} {r['subject']:24} {r['message']}"
            for r in records]


def _cmd_validate(args) -> int:
    pricing = _load(args)
    if pricing is None:
        return EXIT_USAGE
    report = analysis.valid_pricing(pricing)
    payload = jsonio.validity_json(report)
    lines = ["valid" if report.valid else "invalid"]
    lines += _finding_lines(payload["violations"])
    lines += [f"note: {note}" for note in report.notes]
    _emit(args, payload, lines)
    return EXIT_OK if report.valid or not args.strict else EXIT_FINDINGS


def _problem(args, pricing: Pricing) -> engine.ConstraintProblem:
    expr = getattr(args, "filter_expr", None)
    if expr:
        return analysis.filter(pricing, expr)
    return engine.ConstraintProblem(pricing)


def _cmd_count(args) -> int:
    pricing = _load(args)
    if pricing is None:
        return EXIT_USAGE
    n = engine.count(_problem(args, pricing))
    _emit(args, {"count": n}, [str(n)])
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    pricing = _load(args)
    if pricing is None:
        return EXIT_USAGE
    rows = []
    for subscription, valuation in engine.enumerate_solutions(_problem(args, pricing)):
        if len(rows) >= args.limit:
            break
        rows.append(jsonio.solution_json(subscription, valuation, pricing))
    lines = [f"{r['plan'] or '-':12} {', '.join(r['addOns']) or '-':40} {r['cost']:>10}"
             for r in rows]
    _emit(args, {"subscriptions": rows}, lines)
    return EXIT_OK


def _cmd_cost(args) -> int:
    pricing = _load(args)
    if pricing is None:
        return EXIT_USAGE
    subscription = Subscription(args.plan, frozenset(args.add_ons))
    price = engine.subscription_cost(pricing, subscription)
    _emit(args, {"cost": jsonio.price_json(price)}, [str(price)])
    return EXIT_OK


def _cmd_optimum(args) -> int:
    pricing = _load(args)
    if pricing is None:
        return EXIT_USAGE
    result = engine.optimize(_problem(args, pricing), Direction(args.direction))
    payload = jsonio.optimum_json(result, pricing)
    lines = [f"{args.direction} cost: {payload['cost']}"]
    lines += [f"  plan={s['plan'] or '-'} addOns=[{', '.join(s['addOns'])}]"
              for s in payload["subscriptions"]]
    if payload["indeterminate"]:
        lines.append(f"  ({len(payload['indeterminate'])} contact-priced solutions not ranked)")
    _emit(args, payload, lines)
    return EXIT_OK


def _merged_lint(pricing: Pricing, now: date) -> list[dict]:
    records = [jsonio.violation_json(v) for v in engine.check_pricing(pricing)]
    records += [jsonio.finding_json(f) for f in analysis.lint(pricing, now)]
    return records


def _cmd_lint(args) -> int:
    pricing = _load(args)
    if pricing is None:
        return EXIT_USAGE
    records = _merged_lint(pricing, args.now or date.today())
    _emit(args, {"findings": records},
          _finding_lines(records) or ["no findings"])
    return EXIT_FINDINGS if records and args.strict else EXIT_OK


def _cmd_dead(args) -> int:
    pricing = _load(args)
    if pricing is None:
        return EXIT_USAGE
    records = [jsonio.finding_json(f) for f in analysis.dead_elements(pricing)]
    _emit(args, {"findings": records},
          _finding_lines(records) or ["no findings"])
    return EXIT_FINDINGS if records and args.strict else EXIT_OK


def _cmd_stats(args) -> int:
    pricing = _load(args)
    if pricing is None:
        return EXIT_USAGE
    payload = jsonio.stats_json(analysis.stats(pricing))
    lines = [f"{key}: {value}" for key, value in payload.items()]
    _emit(args, payload, lines)
    return EXIT_OK


def _cmd_corpus(args) -> int:
    if not args.directory.is_dir():
        print(f"error: not a directory: {args.directory}", file=sys.stderr)
        return EXIT_USAGE
    report = run_corpus(args.directory, args.op, now=args.now, workers=args.workers)
    payload = report_json(report, timing=not args.no_timing)
    if args.figures is not None:
        from .report import render_corpus_figures
        for created in render_corpus_figures(report, args.figures):
            print(f"wrote {created}", file=sys.stderr)
    lines = [f"{'path':40} {'F':>5} {'P':>3} {'A':>3} {'C':>8} {'findings':>8}"]
    for row in payload["files"]:
        stats = row["stats"] or {}
        lines.append(
            f"{row['path']:40} {stats.get('features', '-'):>5} {stats.get('plans', '-'):>3} "
            f"{stats.get('addOns', '-'):>3} {stats.get('configurationSpaceSize', '-'):>8} "
            f"{len(row['diagnostics']):>8}"
            + (f"  ERROR: {row['error']}" if row.get("error") else ""))
    totals = payload["totals"]
    lines.append(f"total files={totals['files']} errors={totals['errors']} "
                 f"findings={totals['findings']}")
    _emit(args, payload, lines)
    had_trouble = any(row.get("error") for row in payload["files"])
    if had_trouble:
        return EXIT_FINDINGS
    return EXIT_FINDINGS if args.strict and totals["findings"] else EXIT_OK


def _cmd_serve(args) -> int:
    import os

    import uvicorn

    from .service import create_app
    from .store import PricingStore

    port = args.port if args.port is not None else int(os.environ.get("PORT", "8000"))
    data_dir = args.data_dir or (
        Path(os.environ["DATA_DIR"]) if os.environ.get("DATA_DIR") else None)
    app = create_app(PricingStore(data_dir))
    uvicorn.run(app, host=args.host, port=port)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
