"""Command line interface.

Subcommands: search, audit, rank, eval, importance, serve. Exit codes:
0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import AppConfig
from .errors import EmptyQuery, IralError
from .evaluate import (
    evaluate_runs,
    feature_table_csv,
    feature_table_json,
    format_number,
    importance_lines,
    load_feature_table,
    load_judgments,
    parameter_importance,
    serp_feature_table,
)
from .pipeline import SearchEngine
from .providers import SearchResultRecord, sniff_parse
from .query import classify_query, expand_query
from .rank import WeightVector, rank_results
from .seo import HttpPages, FixturePages, audit_page, extract_features
from .service import SearchServer

USAGE_EXIT = 1
RUNTIME_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="iral", description="Meta-search with on-page feature ranking")
    parser.add_argument("--config", help="config file (falls back to $IRAL_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_search = sub.add_parser("search", help="run a query through the pipeline")
    p_search.add_argument("query")
    p_search.add_argument("--page", type=int, default=1)
    p_search.add_argument("--json", action="store_true", help="print the raw response body")

    p_audit = sub.add_parser("audit", help="audit one page's optimization tags")
    p_audit.add_argument("target", help="URL or local HTML file")
    p_audit.add_argument("--query", help="also measure the ranking parameters for this query")

    p_rank = sub.add_parser("rank", help="rank stored provider responses offline")
    p_rank.add_argument("--serps", nargs="+", required=True, help="wire-shaped JSON files")
    p_rank.add_argument("--pages", required=True, help="fixture page directory")
    p_rank.add_argument("--query", required=True)
    p_rank.add_argument("--json", action="store_true")

    p_eval = sub.add_parser("eval", help="precision / relative recall over judged runs")
    p_eval.add_argument("--judgments", required=True, help="judgments CSV")
    p_eval.add_argument("--json", action="store_true")

    p_imp = sub.add_parser("importance", help="parameter contribution for a feature table")
    p_imp.add_argument("--table", required=True, help="feature table CSV")

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8080)
    return parser


def _cmd_search(args, config: AppConfig) -> int:
    if not args.query.strip():
        print("iral: error: query is blank", file=sys.stderr)
        return USAGE_EXIT
    engine = SearchEngine(config)
    payload = engine.search(args.query, args.page)
    if args.json:
        print(json.dumps(payload, separators=(",", ":")))
        return 0
    print(f"{payload['total']} results for {payload['query']!r} (page {payload['page']})")
    if payload["degraded"]:
        print(f"degraded providers: {', '.join(payload['degraded'])}")
    for item in payload["results"]:
        print(f"{item['rank']:>3}. {item['title']}  [{format_number(item['score'])}]")
        print(f"     {item['link']}")
        if item["snippet"]:
            print(f"     {item['snippet']}")
    return 0


def _cmd_audit(args, config: AppConfig) -> int:
    path = Path(args.target)
    if path.exists():
        body: bytes = path.read_bytes()
    else:
        fetched = HttpPages(timeout=config.page_timeout).get(args.target)
        if fetched is None:
            print(f"iral: could not fetch {args.target}", file=sys.stderr)
            return RUNTIME_EXIT
        body = fetched
    report = audit_page(body, args.target)
    print(f"Audit for {report.url}")
    warn = "  [exceeds 64 characters]" if report.title_too_long else ""
    print(f"Title ({report.title_length}): {report.title}{warn}")
    for name, tag in report.tags.items():
        state = f"present: {tag.value}" if tag.present else "absent"
        print(f"  meta {name}: {state}")
    print(f"Images: {report.img_total} total, {report.img_with_alt} with alt text")
    print(f"Breadcrumb: {'yes' if report.breadcrumb else 'no'}")
    print(f"Sitemap references: {', '.join(report.sitemap_refs) or 'none'}")
    print(f"Found {report.links_total} urls from where {report.links_unique} unique.")
    for url, count in report.link_counts:
        print(f"  {url} - {count}")
    for advisory in report.advisories:
        print(f"advisory: {advisory}")
    if args.query:
        expanded = expand_query(classify_query(args.query), None)
        srr = SearchResultRecord(
            title=report.title, link="http://localhost/", snippet="",
            display_link=args.target, provider="audit", provider_rank=1,
        )
        features = extract_features(body, srr, expanded)
        print(f"Features for {args.query!r}:")
        for name, value in zip(
            ("title_match", "meta_description_hits", "meta_keyword_hits", "snippet_hits",
             "meta_expires_fresh", "meta_content_tags", "img_alt_count", "sitemap_present",
             "links_present"),
            features.as_tuple(),
        ):
            print(f"  {name}: {value}")
    return 0


def _cmd_rank(args, config: AppConfig) -> int:
    from .merge import merge_dedupe

    expanded = expand_query(classify_query(args.query), None)
    lists = []
    for serp_file in args.serps:
        body = Path(serp_file).read_bytes()
        lists.append(sniff_parse(body, provider=Path(serp_file).stem))
    merged = merge_dedupe(lists)
    pages = FixturePages(args.pages)
    features = {}
    for record in merged:
        body = pages.get(record.link)
        if body is not None:
            features[record.link] = extract_features(body, record, expanded)
    ranked = rank_results(merged, features, WeightVector(config.weights))
    rows = serp_feature_table(ranked)
    print(feature_table_json(rows) if args.json else feature_table_csv(rows), end="")
    return 0


def _cmd_eval(args, config: AppConfig) -> int:
    report = evaluate_runs(load_judgments(args.judgments))
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
        return 0
    print("Precision (computed vs reported):")
    for cell in report.precision_cells:
        reported = "-" if cell.reported is None else format_number(cell.reported)
        flag = "  DISAGREES with reported value" if cell.disagrees else ""
        print(f"  {cell.engine:<8} {cell.query:<20} {format_number(cell.computed):<12} {reported}{flag}")
    print("Mean precision per engine:")
    for engine, value in report.mean_precision.items():
        extra = ""
        if engine in report.mean_reported_precision:
            extra = f" (from reported cells: {format_number(report.mean_reported_precision[engine])})"
        print(f"  {engine:<8} {format_number(value)}{extra}")
    print("Relative recall per query:")
    for cell in report.recall_cells:
        reported = "-" if cell.reported is None else format_number(cell.reported)
        flag = "  DISAGREES with reported value" if cell.disagrees else ""
        print(f"  {cell.engine:<8} {cell.query:<20} {format_number(cell.computed):<12} {reported}{flag}")
    return 0


def _cmd_importance(args, config: AppConfig) -> int:
    rows = load_feature_table(args.table)
    for line in importance_lines(parameter_importance(rows)):
        print(line)
    return 0


def _cmd_serve(args, config: AppConfig) -> int:
    server = SearchServer(SearchEngine(config), host=args.host, port=args.port)
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


_COMMANDS = {
    "search": _cmd_search,
    "audit": _cmd_audit,
    "rank": _cmd_rank,
    "eval": _cmd_eval,
    "importance": _cmd_importance,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = AppConfig.from_env(args.config)
    except (OSError, ValueError) as exc:
        print(f"iral: bad config: {exc}", file=sys.stderr)
        return RUNTIME_EXIT
    try:
        return _COMMANDS[args.command](args, config)
    except EmptyQuery:
        print("iral: error: query is blank", file=sys.stderr)
        return USAGE_EXIT
    except IralError as exc:
        print(f"iral: {exc}", file=sys.stderr)
        return RUNTIME_EXIT
    except OSError as exc:
        print(f"iral: {exc}", file=sys.stderr)
        return RUNTIME_EXIT


if __name__ == "__main__":
    sys.exit(main())
