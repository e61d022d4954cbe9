"""Offline driver for the whole pipeline.

Subcommands mirror the service: ingest (Canvas or CSV), gen-codebook,
code, model, export, serve. Every command is a thin composition of
library calls; outputs are deterministic given inputs and seed.

Exit codes: 0 success, 1 validation problem, 2 I/O or upstream failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ena
from .codebook import CodebookError, codebook_to_dict
from .coder import code_corpus
from .ingestion import BadHeader, BadRow, CanvasClient, IngestionError, export_csv, import_csv
from .lda import DEFAULT_ITERATIONS, LdaError, extract_codebook, fit_lda
from .service import ServiceConfig, create_app
from .store import DataStore
from .textprep import preprocess_corpus


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise CliError(message, 1)


def _store(args: argparse.Namespace) -> DataStore:
    return DataStore(args.data_dir)


def _posts_or_fail(store: DataStore, discussion_id: str):
    posts = store.load_posts(discussion_id)
    if posts is None:
        raise CliError(f"discussion {discussion_id!r} is not ingested", 1)
    return posts


def _codebook_or_fail(store: DataStore, discussion_id: str, version: int | None):
    codebook = store.load_codebook(discussion_id, version)
    if codebook is None:
        raise CliError(f"no codebook (version {version}) for discussion {discussion_id!r}", 1)
    return codebook


def cmd_ingest(args: argparse.Namespace) -> None:
    store = _store(args)
    if args.csv:
        try:
            data = Path(args.csv).read_bytes()
        except OSError as exc:
            raise CliError(f"cannot read {args.csv}: {exc}", 2)
        imported = import_csv(data, discussion_id=args.discussion, course_id=args.course or "imported")
        store.save_posts(args.discussion, imported.posts)
        print(f"ingested {len(imported.posts)} posts into discussion {args.discussion}")
        return
    if not args.course:
        raise CliError("ingest needs --csv or --course", 1)
    client = CanvasClient()
    if not client.base_url or not client.token:
        raise CliError("set CANVAS_BASE_URL and CANVAS_TOKEN to ingest from Canvas", 1)
    summaries = client.fetch_discussions(args.course)
    store.save_summaries(args.course, summaries)
    wanted = [s for s in summaries if args.discussion in (None, s.discussion_id)]
    for summary in wanted:
        posts = client.fetch_posts(args.course, summary.discussion_id)
        store.save_posts(summary.discussion_id, posts)
        print(f"ingested {len(posts)} posts into discussion {summary.discussion_id}")


def cmd_gen_codebook(args: argparse.Namespace) -> None:
    store = _store(args)
    if args.corpus:
        try:
            corpus_posts = import_csv(Path(args.corpus).read_bytes()).posts
        except OSError as exc:
            raise CliError(f"cannot read {args.corpus}: {exc}", 2)
    else:
        corpus_posts = _posts_or_fail(store, args.discussion)
    docs = preprocess_corpus(corpus_posts)
    model = fit_lda(docs, seed=args.seed, iterations=args.iterations)
    codebook = extract_codebook(model, args.discussion)

    out_dir = Path(args.data_dir) / "discussions" / args.discussion
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / "codebook-generated.json"
    out_path.write_text(
        json.dumps(codebook_to_dict(codebook), sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    if store.latest_version(args.discussion) == 0:
        store.append_codebook(args.discussion, codebook, author="topic-model")
        print(f"installed generated codebook as version 1 ({out_path})")
    else:
        print(f"wrote generated codebook to {out_path} (store already has versions)")


def _coded(store: DataStore, args: argparse.Namespace):
    posts = _posts_or_fail(store, args.discussion)
    codebook = _codebook_or_fail(store, args.discussion, args.version)
    docs = preprocess_corpus(posts)
    return code_corpus(docs, posts, codebook), codebook


def cmd_code(args: argparse.Namespace) -> None:
    store = _store(args)
    codebook = _codebook_or_fail(store, args.discussion, args.version)
    if args.from_csv:
        try:
            posts = import_csv(Path(args.from_csv).read_bytes(), discussion_id=args.discussion).posts
        except OSError as exc:
            raise CliError(f"cannot read {args.from_csv}: {exc}", 2)
    else:
        posts = _posts_or_fail(store, args.discussion)
    docs = preprocess_corpus(posts)
    coded = code_corpus(docs, posts, codebook)
    out_path = _versioned_path(args, codebook.version, "coded.csv")
    out_path.write_bytes(export_csv(coded, codebook))
    print(f"wrote {len(coded)} coded posts to {out_path}")


def _versioned_path(args: argparse.Namespace, version: int, name: str) -> Path:
    if getattr(args, "out", None):
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        return path
    out_dir = Path(args.data_dir) / "discussions" / args.discussion / str(version)
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / name


def _edge_summary(model: ena.EnaModel) -> str:
    lines = [f"scope={model.scope} codebook_version={model.codebook_version}"]
    for idx, (i, j) in enumerate(ena.PAIRS):
        weight = float(model.group_mean[idx])
        if weight > 0:
            lines.append(f"{model.topic_names[i]} -- {model.topic_names[j]}: {weight:.6f}")
    if len(lines) == 1:
        lines.append("(no connections)")
    return "\n".join(lines) + "\n"


def _model_svg(model: ena.EnaModel) -> str:
    """Tiny standalone rendering: nodes, weight-scaled edges, unit points."""
    size, pad = 420, 40
    coords = list(model.code_positions) + [u.point for u in model.units]
    span = max((max(abs(float(x)), abs(float(y))) for x, y in coords), default=0.0) or 1.0
    scale = (size / 2 - pad) / span

    def xy(p) -> tuple[float, float]:
        return size / 2 + float(p[0]) * scale, size / 2 - float(p[1]) * scale

    max_w = max((float(w) for w in model.group_mean), default=0.0)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    for idx, (i, j) in enumerate(ena.PAIRS):
        w = float(model.group_mean[idx])
        if w <= 0:
            continue
        x1, y1 = xy(model.code_positions[i])
        x2, y2 = xy(model.code_positions[j])
        width = 1.0 + 7.0 * (w / max_w if max_w else 0.0)
        parts.append(
            f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
            f'stroke="#4a76a8" stroke-width="{width:.2f}" stroke-linecap="round"/>'
        )
    for u in model.units:
        x, y = xy(u.point)
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="#999"/>')
    for i, name in enumerate(model.topic_names):
        x, y = xy(model.code_positions[i])
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="6" fill="#c0392b"/>')
        parts.append(f'<text x="{x + 8:.1f}" y="{y - 8:.1f}" font-size="11">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_model(args: argparse.Namespace) -> None:
    store = _store(args)
    posts = _posts_or_fail(store, args.discussion)
    codebook = _codebook_or_fail(store, args.discussion, args.version)
    model = ena.build_model(posts, codebook, scope=args.scope)
    out_dir = Path(args.data_dir) / "discussions" / args.discussion / str(codebook.version)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"model-{args.scope}.json"
    json_path.write_text(
        json.dumps(ena.model_to_dict(model), sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    (out_dir / f"model-{args.scope}.edges.txt").write_text(_edge_summary(model), encoding="utf-8")
    (out_dir / f"model-{args.scope}.svg").write_text(_model_svg(model), encoding="utf-8")
    print(f"wrote model for {len(model.units)} students to {json_path}")


def cmd_export(args: argparse.Namespace) -> None:
    store = _store(args)
    coded, codebook = _coded(store, args)
    out_path = _versioned_path(args, codebook.version, "export.csv")
    out_path.write_bytes(export_csv(coded, codebook))
    print(f"wrote {out_path}")


def cmd_serve(args: argparse.Namespace) -> None:
    import uvicorn

    config = ServiceConfig.from_env()
    config.data_dir = args.data_dir
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=args.port)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="discussena", description=__doc__)
    parser.add_argument("--data-dir", default="data", help="data directory (default: ./data)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="pull a course from Canvas or read a CSV corpus")
    p.add_argument("--course", help="Canvas course id")
    p.add_argument("--discussion", help="discussion id (required with --csv)")
    p.add_argument("--csv", help="CSV file to import instead of Canvas")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("gen-codebook", help="fit the topic model and write the starter codebook")
    p.add_argument("--discussion", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS)
    p.add_argument("--corpus", help="CSV corpus to model instead of the discussion's own posts")
    p.set_defaults(func=cmd_gen_codebook)

    p = sub.add_parser("code", help="code posts and write the coded CSV")
    p.add_argument("--discussion", required=True)
    p.add_argument("--version", type=int)
    p.add_argument("--from-csv", dest="from_csv", help="code this CSV instead of the stored posts")
    p.add_argument("--out")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("model", help="build the network model, write JSON + SVG + edge summary")
    p.add_argument("--discussion", required=True)
    p.add_argument("--scope", choices=list(ena.SCOPES), default=ena.SCOPE_ALL)
    p.add_argument("--version", type=int)
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("export", help="write the coded corpus CSV for external network tools")
    p.add_argument("--discussion", required=True)
    p.add_argument("--version", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (CodebookError, LdaError, ena.EnaError, BadHeader, BadRow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (IngestionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
