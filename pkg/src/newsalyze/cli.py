"""Operator entry point: `newsalyze ingest | analyze | serve | export`.

Exit codes are a stable scripting contract: 0 success, 1 usage error,
2 data/validation error, 3 I/O or network error. Writer commands (ingest,
analyze) take a store-level lock file so only one runs per store at a time.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from .errors import DataError, IOFailure, NewsalyzeError, StoreLockedError
from .pipeline import analyze_topic, ingest_topic
from .store import AnalysisParams, Store, TopicConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

DEFAULT_PORT = 8787


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


@contextmanager
def store_lock(root: Path):
    """One writer command per store; stale locks from dead processes are reclaimed."""
    root.mkdir(parents=True, exist_ok=True)
    lock_path = root / ".lock"
    for attempt in range(2):
        try:
            fd = os.open(lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            break
        except FileExistsError:
            holder = ""
            try:
                holder = lock_path.read_text(encoding="utf-8").strip()
                os.kill(int(holder), 0)
            except (OSError, ValueError):
                if attempt == 0:
                    lock_path.unlink(missing_ok=True)
                    continue
            raise StoreLockedError(str(lock_path), holder or "unknown pid")
    try:
        os.write(fd, str(os.getpid()).encode("ascii"))
        os.close(fd)
        yield
    finally:
        lock_path.unlink(missing_ok=True)


def _build_parser() -> _Parser:
    parser = _Parser(prog="newsalyze", description=__doc__)
    parser.add_argument(
        "--store",
        default=os.environ.get("NEWSALYZE_STORE", "store"),
        help="store directory (env NEWSALYZE_STORE)",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="fetch, extract, and store a topic's articles")
    p_ingest.add_argument("--topic", required=True, metavar="CONFIG_FILE")
    p_ingest.add_argument("--offline", metavar="FIXTURE_DIR")

    p_analyze = sub.add_parser("analyze", help="run the analysis pipeline over a stored topic")
    p_analyze.add_argument("--topic", required=True, metavar="TOPIC_ID")
    p_analyze.add_argument("--scorer", choices=("lexicon", "remote"), default="lexicon")
    p_analyze.add_argument("--endpoint", help="remote scorer URL (with --scorer remote)")
    p_analyze.add_argument("--top-k", type=int, dest="top_k")
    p_analyze.add_argument("--merge-threshold", type=float, dest="merge_threshold")
    p_analyze.add_argument("--negation-window", type=int, dest="negation_window")
    p_analyze.add_argument("--neutral-band", type=float, dest="neutral_band")
    p_analyze.add_argument(
        "--include-self-tokens",
        action="store_true",
        help="let a mention's own tokens contribute sentiment",
    )

    p_serve = sub.add_parser("serve", help="serve the read-only API (and optionally the UI)")
    p_serve.add_argument(
        "--port", type=int, default=int(os.environ.get("NEWSALYZE_PORT", DEFAULT_PORT))
    )
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--ui", metavar="DIR", help="static UI assets to serve at /")
    p_serve.add_argument(
        "--cors-origin",
        action="append",
        dest="cors_origins",
        metavar="ORIGIN",
        help="allowed CORS origin (repeatable; default *)",
    )

    p_export = sub.add_parser("export", help="export a topic's analysis bundle")
    p_export.add_argument("--topic", required=True, metavar="TOPIC_ID")
    p_export.add_argument("--format", choices=("json", "csv"), required=True)
    p_export.add_argument("--out", required=True, metavar="PATH")

    return parser


def _cmd_ingest(store: Store, args: argparse.Namespace) -> int:
    config_path = Path(args.topic)
    if not config_path.exists():
        raise IOFailure(f"topic config not found: {config_path}")
    try:
        config = TopicConfig.from_dict(json.loads(config_path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise DataError(f"invalid topic config {config_path}: {exc}") from exc
    with store_lock(store.root):
        reports = ingest_topic(store, config, args.offline)
    stored = 0
    for report in reports:
        if report.ok:
            status = "stored" if report.created else "exists"
            print(f"[{status}] {report.outlet}: {report.url} -> {report.article_id}", file=sys.stderr)
            stored += 1
        else:
            print(f"[failed] {report.outlet}: {report.url}: {report.error}", file=sys.stderr)
    print(f"{stored}/{len(reports)} articles available for topic {config.topic_id!r}", file=sys.stderr)
    return EXIT_OK if stored >= 1 else EXIT_IO


def _effective_params(config_params: AnalysisParams, args: argparse.Namespace) -> AnalysisParams:
    # command-line values override the topic config; the bundle records the result
    return AnalysisParams(
        top_k_concepts=args.top_k if args.top_k is not None else config_params.top_k_concepts,
        merge_threshold=(
            args.merge_threshold
            if args.merge_threshold is not None
            else config_params.merge_threshold
        ),
        negation_window=(
            args.negation_window
            if args.negation_window is not None
            else config_params.negation_window
        ),
        neutral_band=(
            args.neutral_band if args.neutral_band is not None else config_params.neutral_band
        ),
    )


def _cmd_analyze(store: Store, args: argparse.Namespace) -> int:
    if args.scorer == "remote" and not args.endpoint:
        raise _UsageError("--scorer remote requires --endpoint")
    config = store.get_topic(args.topic)
    params = _effective_params(config.analysis_params, args)
    with store_lock(store.root):
        bundle = analyze_topic(
            store,
            args.topic,
            params=params,
            scorer=args.scorer,
            endpoint=args.endpoint,
            include_self_tokens=args.include_self_tokens,
        )
    _, articles = store.load_topic(args.topic)
    _print_concept_table(bundle, articles)
    return EXIT_OK


def _print_concept_table(bundle, articles) -> None:
    from .concepts import rank  # local import keeps CLI import time low

    top = rank(bundle.concepts, bundle.params_used.top_k_concepts)
    ordered = sorted(articles, key=lambda a: (a.outlet, a.article_id))
    headers = ["concept", "freq"] + [a.outlet[:14] for a in ordered]
    rows = []
    for concept in top:
        row = [concept.canonical_label, str(concept.frequency)]
        for article in ordered:
            bar = next(
                (
                    b
                    for b in bundle.histograms[article.article_id].bars
                    if b.concept_id == concept.concept_id
                ),
                None,
            )
            row.append("-" if bar is None or bar.count == 0 else f"{bar.mean_polarity:+.2f}")
        rows.append(row)
    widths = [max(len(r[i]) for r in [headers] + rows) for i in range(len(headers))]
    for row in [headers] + rows:
        print("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))


def _cmd_export(store: Store, args: argparse.Namespace) -> int:
    bundle = store.get_bundle(args.topic)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        out.write_text(
            json.dumps(bundle.to_dict(), ensure_ascii=False, sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
        return EXIT_OK

    from .concepts import rank

    _, articles = store.load_topic(args.topic)
    top = rank(bundle.concepts, bundle.params_used.top_k_concepts)
    labels = {c.concept_id: c.canonical_label for c in top}
    with open(out, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            [
                "article_id",
                "outlet",
                "concept_id",
                "canonical_label",
                "count",
                "height",
                "mean_polarity",
                "color_class",
            ]
        )
        for article in sorted(articles, key=lambda a: (a.outlet, a.article_id)):
            for bar in bundle.histograms[article.article_id].bars:
                writer.writerow(
                    [
                        article.article_id,
                        article.outlet,
                        bar.concept_id,
                        labels.get(bar.concept_id, ""),
                        bar.count,
                        f"{bar.height:.6f}",
                        f"{bar.mean_polarity:.6f}",
                        bar.color_class,
                    ]
                )
    return EXIT_OK


def _cmd_serve(store: Store, args: argparse.Namespace) -> int:
    import uvicorn

    from .serve import create_app

    app = create_app(
        store,
        ui_dir=args.ui,
        cors_origins=tuple(args.cors_origins) if args.cors_origins else ("*",),
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return EXIT_USAGE

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    store = Store(args.store)
    try:
        if args.command == "ingest":
            return _cmd_ingest(store, args)
        if args.command == "analyze":
            return _cmd_analyze(store, args)
        if args.command == "export":
            return _cmd_export(store, args)
        if args.command == "serve":
            return _cmd_serve(store, args)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"newsalyze: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IOFailure as exc:
        print(f"newsalyze: {exc}", file=sys.stderr)
        return EXIT_IO
    except DataError as exc:
        print(f"newsalyze: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NewsalyzeError as exc:
        print(f"newsalyze: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    raise SystemExit(main())
