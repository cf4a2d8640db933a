"""Command-line interface.

Subcommands:

* ``resolve`` one id: human-readable report, ``--json`` for the service
  payload, ``--bibtex`` for citations only. Exit codes: 0 resolved,
  1 unresolved, 2 input error, 3 arXiv failure.
* ``serve`` the HTTP service.
* ``stats`` / ``sample`` / ``bulk``: experiment harness over a metadata
  snapshot, writing CSVs and figures.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import date
from pathlib import Path
from typing import Optional

from .bibtex import CiteKeyAllocator, render_candidate, render_entries, render_preprint
from .config import ResolverConfig, __version__, load_config
from .errors import InputError, NetworkError, NotFound, ParseError, RateLimited
from .model import SourceDatabase
from .resolver import Resolver

EXIT_RESOLVED = 0
EXIT_UNRESOLVED = 1
EXIT_INPUT_ERROR = 2
EXIT_ARXIV_FAILURE = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arxpub",
        description="Find the peer-reviewed published version of an arXiv preprint.",
    )
    parser.add_argument("--version", action="version", version=f"arxpub {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    resolve_p = sub.add_parser("resolve", help="resolve one arXiv id or URL")
    resolve_p.add_argument("id", help="arXiv id, arXiv URL, or prefixed id")
    output = resolve_p.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true", help="print the full JSON payload")
    output.add_argument("--bibtex", action="store_true", help="print BibTeX only")
    _add_pipeline_flags(resolve_p)

    serve_p = sub.add_parser("serve", help="run the HTTP service")
    serve_p.add_argument("--host", default=None)
    serve_p.add_argument("--port", type=int, default=None)
    serve_p.add_argument("--ui-dir", type=Path, default=None, help="built UI bundle to serve at /")
    _add_pipeline_flags(serve_p)

    stats_p = sub.add_parser("stats", help="dataset statistics from a metadata snapshot")
    stats_p.add_argument("snapshot", type=Path, help="line-delimited metadata snapshot")
    stats_p.add_argument("--out", type=Path, default=Path("reports"), help="output directory")
    stats_p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    sample_p = sub.add_parser("sample", help="draw a reproducible preprint sample")
    sample_p.add_argument("snapshot", type=Path)
    sample_p.add_argument("--field", default="cs", help="research field (prefix or name)")
    sample_p.add_argument("--before", type=date.fromisoformat, default=date(2022, 1, 1),
                          help="first-submission cutoff (ISO date)")
    sample_p.add_argument("--n", type=int, default=1000)
    sample_p.add_argument("--seed", type=int, default=0)
    sample_p.add_argument("--out", type=Path, default=None, help="write ids here instead of stdout")

    bulk_p = sub.add_parser("bulk", help="resolve a sample of ids and summarize")
    bulk_p.add_argument("ids", type=Path, help="file with one arXiv id per line")
    bulk_p.add_argument("--out", type=Path, default=Path("reports"), help="output directory")
    bulk_p.add_argument("--delay", type=float, default=1.0,
                        help="seconds between live resolutions")
    bulk_p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    _add_pipeline_flags(bulk_p)

    return parser


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="YAML or JSON config file")
    parser.add_argument("--fixtures", type=Path, default=None,
                        help="replay recorded responses from this directory")
    parser.add_argument("--record", type=Path, default=None,
                        help="record live responses into this directory")
    parser.add_argument("--timeout", type=float, default=None, help="per-request timeout [s]")
    parser.add_argument("--title-ratio", type=float, default=None,
                        help="title distance ratio threshold (default 0.05)")
    parser.add_argument("--author-ratio", type=float, default=None,
                        help="author match ratio threshold (default 0.70)")
    parser.add_argument("--db", default=None,
                        help="comma-separated databases to query (dblp, crossref, s2, openalex)")
    parser.add_argument("--mailto", default=None, help="contact address for polite API use")
    parser.add_argument("--s2-key", default=None, help="SemanticScholar API key")
    parser.add_argument("--tex-escape", action="store_true",
                        help="transliterate accented characters in BibTeX values")


def _config_from_args(args: argparse.Namespace) -> ResolverConfig:
    overrides: dict[str, object] = {
        "fixtures_dir": getattr(args, "fixtures", None),
        "record_dir": getattr(args, "record", None),
        "request_timeout": getattr(args, "timeout", None),
        "mailto": getattr(args, "mailto", None),
        "semantic_scholar_api_key": getattr(args, "s2_key", None),
        "host": getattr(args, "host", None),
        "port": getattr(args, "port", None),
        "ui_dir": getattr(args, "ui_dir", None),
    }
    if getattr(args, "tex_escape", False):
        overrides["tex_escape"] = True
    if getattr(args, "db", None):
        overrides["enabled_databases"] = tuple(
            name for name in str(args.db).split(",") if name.strip()
        )
    config = load_config(getattr(args, "config", None), overrides)
    title_ratio = getattr(args, "title_ratio", None)
    author_ratio = getattr(args, "author_ratio", None)
    if title_ratio is not None or author_ratio is not None:
        thresholds = config.thresholds
        config = config.updated(
            {
                "thresholds": {
                    "title_ratio_max": title_ratio if title_ratio is not None else thresholds.title_ratio_max,
                    "author_ratio_min": author_ratio if author_ratio is not None else thresholds.author_ratio_min,
                }
            }
        )
    return config


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "resolve": _cmd_resolve,
        "serve": _cmd_serve,
        "stats": _cmd_stats,
        "sample": _cmd_sample,
        "bulk": _cmd_bulk,
    }[args.command]
    try:
        return handler(args)
    except ValueError as exc:  # bad flag values (thresholds, database names, config)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def entrypoint() -> None:
    sys.exit(main())


# ----------------------------------------------------------------- commands

def _cmd_resolve(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    resolver = Resolver(config)
    try:
        outcome = resolver.resolve_input(args.id)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (NotFound, NetworkError, RateLimited, ParseError) as exc:
        print(f"error: arXiv lookup failed: {exc}", file=sys.stderr)
        return EXIT_ARXIV_FAILURE

    report = outcome.report
    if args.json:
        print(json.dumps(outcome.to_response_dict(tex_escape=config.tex_escape), indent=2))
    elif args.bibtex:
        keys = CiteKeyAllocator()
        if report.resolved:
            entries = [
                render_candidate(c, keys=keys, tex_escape=config.tex_escape)
                for c in report.accepted()
            ]
        else:
            entries = [render_preprint(report.preprint, keys=keys, tex_escape=config.tex_escape)]
        print(render_entries(entries))
    else:
        _print_human_report(outcome, config)
    return EXIT_RESOLVED if report.resolved else EXIT_UNRESOLVED


def _print_human_report(outcome, config: ResolverConfig) -> None:
    report = outcome.report
    preprint = report.preprint
    print(f"Preprint  {preprint.id.normalized} (v{preprint.latest_version})")
    print(f"  {preprint.title}")
    print(f"  {', '.join(a.full for a in preprint.authors)}")
    if preprint.doi:
        print(f"  DOI: {preprint.doi}")
    print()
    for result in outcome.provider_results:
        db = result.source
        accepted = report.per_database.get(db, ())
        status = f"{len(accepted)} match(es)" if accepted else "no match"
        print(f"{db.label}: {status} [{result.filter_mode.value.lower()} filtering]")
        for candidate in accepted:
            where = candidate.journal or candidate.venue or "?"
            year = candidate.year or "?"
            doi = f", doi:{candidate.doi}" if candidate.doi else ""
            print(f"  - {candidate.title} ({where}, {year}{doi})")
        for error in result.errors_encountered:
            print(f"  ! {error}")
    print()
    if report.resolved:
        keys = CiteKeyAllocator()
        entries = [
            render_candidate(c, keys=keys, tex_escape=config.tex_escape)
            for c in report.accepted()
        ]
        print(render_entries(entries))
    else:
        print("No published version found; citing the preprint itself:")
        print()
        print(render_preprint(preprint, tex_escape=config.tex_escape).render())


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import run_server

    config = _config_from_args(args)
    try:
        run_server(config)
    except OSError as exc:
        print(f"error: cannot listen on {config.host}:{config.port}: {exc}", file=sys.stderr)
        return 1
    return 0


def _cmd_stats(args: argparse.Namespace) -> int:
    from .harness import compute_snapshot_stats, write_stats_csv

    try:
        stats = compute_snapshot_stats(args.snapshot)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    args.out.mkdir(parents=True, exist_ok=True)
    csv_path = args.out / "stats.csv"
    write_stats_csv(stats, csv_path)
    written = [csv_path]
    if not args.no_figures and stats.per_field:
        from .figures import save_snapshot_overview

        written.append(save_snapshot_overview(stats, args.out / "stats.png"))
    overall = stats.overall
    print(
        f"{overall.preprint_count} preprints, "
        f"{overall.count_without_publication_info} without publication info "
        f"({overall.ratio_without_info * 100:.2f}%), "
        f"mean versions {overall.mean_version_count:.2f}"
    )
    if stats.malformed_count:
        print(f"skipped {stats.malformed_count} malformed record(s)", file=sys.stderr)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    from .errors import PopulationTooSmall
    from .harness import sample_subset

    try:
        ids = sample_subset(args.snapshot, args.field, args.before, args.n, args.seed)
    except PopulationTooSmall as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = "\n".join(ids) + "\n"
    if args.out:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text, encoding="utf-8")
        print(f"wrote {len(ids)} ids to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_bulk(args: argparse.Namespace) -> int:
    from .figures import save_per_year_rates, save_subset_breakdown
    from .harness import (
        bulk_resolve,
        write_failures_csv,
        write_per_year_csv,
        write_summary_csv,
        write_venn_csv,
    )

    config = _config_from_args(args)
    try:
        ids = [line.strip() for line in args.ids.read_text(encoding="utf-8").splitlines() if line.strip()]
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not ids:
        print("error: no ids to resolve", file=sys.stderr)
        return 1

    resolver = Resolver(config)

    def progress(done: int, total: int, raw_id: str, resolved: Optional[bool]) -> None:
        mark = {True: "resolved", False: "unresolved", None: "failed"}[resolved]
        print(f"[{done}/{total}] {raw_id}: {mark}", file=sys.stderr)

    summary = bulk_resolve(ids, resolver, delay=args.delay, progress=progress)

    args.out.mkdir(parents=True, exist_ok=True)
    write_summary_csv(summary, args.out / "summary.csv")
    write_venn_csv(summary, args.out / "venn.csv")
    write_per_year_csv(summary, args.out / "per_year.csv")
    written = [args.out / "summary.csv", args.out / "venn.csv", args.out / "per_year.csv"]
    if summary.failures:
        write_failures_csv(summary, args.out / "failures.csv")
        written.append(args.out / "failures.csv")
    if not args.no_figures:
        if summary.venn:
            written.append(save_subset_breakdown(summary, args.out / "venn.png"))
        if summary.per_year:
            written.append(save_per_year_rates(summary, args.out / "per_year.png"))

    print(
        f"resolved {summary.overall_resolved}/{summary.sample_size} "
        f"({summary.overall_ratio * 100:.1f}%)"
    )
    for db in SourceDatabase:
        print(f"  {db.label}: {summary.per_database_resolved[db]}")
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    entrypoint()
