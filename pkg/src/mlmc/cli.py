"""Command line front end.

Subcommands cover every computation headlessly: ``validate``, ``metrics``,
``threshold``, ``confusion``, and ``serve``. Exit codes follow a fixed
convention so scripts can branch on them:

    0  success (warnings allowed)
    1  domain error (validation failure, unknown name, bad value)
    2  environment error (missing path, unwritable output, busy port)

Reports go to stdout unless ``--out`` names a file; nothing is created
implicitly.
"""

from __future__ import annotations

import argparse
import json
import os
import socket
import sys
from pathlib import Path

from . import reports
from .api import DATA_ROOT_ENV, ApiConfig, create_app
from .ingest import IngestError, apply_threshold, format_hard_run, load_scored_run, parse_dataset
from .metrics import DIRECTIONS, SORT_KEYS, DatasetMetrics

DEFAULT_LISTEN = "127.0.0.1:8000"

OK = 0
DOMAIN_ERROR = 1
ENVIRONMENT_ERROR = 2


class EnvironmentFailure(Exception):
    """Raised for I/O and setup problems that map to exit code 2."""


def _dataset_dir(args: argparse.Namespace) -> Path:
    value = args.dataset or os.environ.get(DATA_ROOT_ENV)
    if not value:
        raise EnvironmentFailure(f"no dataset directory given (use --dataset or {DATA_ROOT_ENV})")
    path = Path(value)
    if not path.is_dir():
        raise EnvironmentFailure(f"dataset directory {str(path)!r} does not exist")
    return path


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    target = Path(out)
    if not target.parent.exists():
        raise EnvironmentFailure(f"output directory {str(target.parent)!r} does not exist")
    target.write_text(text, encoding="utf-8", newline="")


def _parse_sort(value: str) -> tuple[str, str]:
    """``KEY`` or ``KEY:DIRECTION`` where DIRECTION is asc or desc."""
    key, _, direction = value.partition(":")
    direction = direction or "asc"
    if key not in SORT_KEYS:
        raise ValueError(f"unknown sort key {key!r} (choose from {', '.join(SORT_KEYS)})")
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown sort direction {direction!r} (choose asc or desc)")
    return key, direction


def cmd_validate(args: argparse.Namespace) -> int:
    root = _dataset_dir(args)
    try:
        result = parse_dataset(root, threshold=args.threshold, gte=args.gte)
    except IngestError as exc:
        _emit(json.dumps(exc.report.to_json(), indent=2, ensure_ascii=False), None)
        return DOMAIN_ERROR
    _emit(json.dumps(result.report.to_json(), indent=2, ensure_ascii=False), None)
    return OK


def cmd_metrics(args: argparse.Namespace) -> int:
    root = _dataset_dir(args)
    sort, direction = _parse_sort(args.sort)
    result = parse_dataset(root, threshold=args.threshold, gte=args.gte)
    metrics = DatasetMetrics(result.dataset)
    document = reports.metrics_document(metrics, sort, direction, args.run)
    if args.format == "json":
        _emit(json.dumps(document, indent=2, ensure_ascii=False), args.out)
    else:
        _emit(reports.metrics_document_csv(document), args.out)
    return OK


def cmd_threshold(args: argparse.Namespace) -> int:
    root = _dataset_dir(args)
    result = parse_dataset(root, threshold=args.threshold, gte=args.gte)
    scored = load_scored_run(root, args.run)
    hard = apply_threshold(scored, args.threshold, gte=args.gte)
    _emit(format_hard_run(hard, result.dataset), args.out)
    return OK


def cmd_confusion(args: argparse.Namespace) -> int:
    root = _dataset_dir(args)
    result = parse_dataset(root, threshold=args.threshold, gte=args.gte)
    result.dataset.run(args.run)  # KeyError -> domain error before any output
    metrics = DatasetMetrics(result.dataset)
    _emit(reports.confusion_csv(metrics, args.run), args.out)
    return OK


def _parse_listen(value: str) -> tuple[str, int]:
    host, _, port = value.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"listen address {value!r} must look like HOST:PORT")
    return host, int(port)


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    host, port = _parse_listen(args.listen)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise EnvironmentFailure(f"cannot listen on {args.listen}: {exc}")
    finally:
        probe.close()

    data_root = args.dataset or os.environ.get(DATA_ROOT_ENV)
    config = ApiConfig.from_env()
    config.data_root = Path(data_root) if data_root else None
    if args.static:
        config.static_dir = Path(args.static)
    app = create_app(config)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mlmc",
        description="Evaluate multi-label classifier runs against a shared ground truth.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_out: bool = True) -> None:
        p.add_argument("--dataset", help=f"dataset directory (default: ${DATA_ROOT_ENV})")
        p.add_argument(
            "--threshold",
            type=float,
            default=0.5,
            help="cut applied to scored runs at load time (default 0.5)",
        )
        p.add_argument(
            "--gte",
            action="store_true",
            help="assign labels on score >= threshold instead of strict >",
        )
        if with_out:
            p.add_argument("--out", help="write to this file instead of stdout")

    p = sub.add_parser("validate", help="check a dataset directory and print the report")
    add_common(p, with_out=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("metrics", help="per-label metrics, summaries, and similarity matrix")
    add_common(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument(
        "--sort",
        default="id",
        help="label order: id | gt-frequency | f1 | total-f1, optionally KEY:desc",
    )
    p.add_argument("--run", help="run name for the f1 sort key")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("threshold", help="turn a scored run into a hard prediction file")
    add_common(p)
    p.add_argument("--run", required=True, help="scored run name from the manifest")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("confusion", help="tuple-class confusion matrix as CSV")
    add_common(p)
    p.add_argument("--run", required=True, help="run name from the manifest")
    p.set_defaults(func=cmd_confusion)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--dataset", help=f"dataset directory to preload (default: ${DATA_ROOT_ENV})")
    p.add_argument("--listen", default=DEFAULT_LISTEN, help=f"HOST:PORT (default {DEFAULT_LISTEN})")
    p.add_argument("--static", help="directory with the dashboard bundle to host at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EnvironmentFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ENVIRONMENT_ERROR
    except IngestError as exc:
        print(json.dumps(exc.report.to_json(), indent=2, ensure_ascii=False), file=sys.stderr)
        return DOMAIN_ERROR
    except (ValueError, KeyError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return DOMAIN_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ENVIRONMENT_ERROR


def entrypoint() -> None:
    raise SystemExit(main())
