"""Command line interface: classify, iso, and validate subcommands.

Exit codes: 0 success, 1 validation failure, 2 partial or unknown results.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import catalog as catalog_mod
from .errors import CatalogError, GAQError
from .pipeline import (
    PipelineConfig,
    classify_orders,
    iso_query,
    render_counts_table,
)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARTIAL = 2


def _parse_orders(args) -> list[int]:
    if args.order is not None:
        return [args.order]
    text = args.orders
    if ".." in text:
        lo, hi = text.split("..", 1)
        lo_i, hi_i = int(lo), int(hi)
        if lo_i < 1 or hi_i < lo_i:
            raise ValueError(f"bad order range {text!r}")
        return list(range(lo_i, hi_i + 1))
    return [int(text)]


def _config_from_args(args) -> PipelineConfig:
    overrides = {}
    if getattr(args, "aut_budget", None) is not None:
        overrides["aut_budget"] = args.aut_budget
    if getattr(args, "node_budget", None) is not None:
        overrides["node_budget"] = args.node_budget
    if getattr(args, "oracle", False):
        overrides["oracle"] = True
    if getattr(args, "threads", None) is not None:
        overrides["threads"] = args.threads
    if getattr(args, "catalog", None) is not None:
        overrides["catalog_path"] = args.catalog
    if getattr(args, "cache", None) is not None:
        overrides["cache_dir"] = args.cache
    return PipelineConfig.from_env(**overrides)


def _cmd_classify(args) -> int:
    orders = _parse_orders(args)
    config = _config_from_args(args)
    try:
        reports = classify_orders(orders, config)
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    for report in reports:
        print(report.render_text())
    print()
    print(render_counts_table(reports), end="")
    if args.json:
        payload = {"schema": 1, "reports": [r.to_json_dict() for r in reports]}
        Path(args.json).write_text(json.dumps(payload, indent=2, sort_keys=True),
                                   encoding="utf-8")
    if any(r.partial for r in reports):
        print("warning: some orders are partial; counts suppressed",
              file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _parse_spec(text: str) -> tuple[int, int, str]:
    parts = text.split(":", 2)
    if len(parts) != 3:
        raise ValueError(f"spec must look like ORDER:GID:TWISTFILE, got {text!r}")
    return int(parts[0]), int(parts[1]), parts[2]


def _cmd_iso(args) -> int:
    config = _config_from_args(args)
    try:
        result = iso_query(_parse_spec(args.a), _parse_spec(args.b), config)
    except (GAQError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    print(result.verdict)
    if args.json:
        Path(args.json).write_text(
            json.dumps(result.to_json_dict(), indent=2, sort_keys=True),
            encoding="utf-8")
    elif result.witness is not None:
        print(json.dumps(result.witness, indent=2, sort_keys=True))
    return EXIT_PARTIAL if result.verdict == "unknown" else EXIT_OK


def _cmd_validate(args) -> int:
    orders = ([args.order] if args.order is not None
              else catalog_mod.shipped_orders(args.catalog))
    failures = 0
    for order in orders:
        report = catalog_mod.validate_catalog(order, args.catalog)
        if report.ok:
            print(f"order {order}: ok ({report.entry_count} groups)")
        else:
            failures += 1
            for problem in report.problems:
                print(f"order {order}: {problem.kind}: {problem.message}",
                      file=sys.stderr)
    return EXIT_VALIDATION if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaq",
        description="Classify and compare twisted-group quandles of finite groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_classify = sub.add_parser(
        "classify", help="count quandle isomorphism classes per order")
    group = p_classify.add_mutually_exclusive_group(required=True)
    group.add_argument("--order", type=int, help="single order")
    group.add_argument("--orders", type=str, help="range A..B (inclusive)")
    p_classify.add_argument("--catalog", type=str, help="catalog file path")
    p_classify.add_argument("--aut-budget", type=int,
                            help="max automorphisms to enumerate per group")
    p_classify.add_argument("--node-budget", type=int,
                            help="node cap for the raw-table oracle")
    p_classify.add_argument("--oracle", action="store_true",
                            help="re-check every decision with the raw-table oracle")
    p_classify.add_argument("--threads", type=int,
                            help="worker processes for per-group enumeration")
    p_classify.add_argument("--cache", type=str, help="report cache directory")
    p_classify.add_argument("--json", type=str, help="write reports as JSON")
    p_classify.set_defaults(func=_cmd_classify)

    p_iso = sub.add_parser(
        "iso", help="decide whether two (group, twist) quandles are isomorphic")
    p_iso.add_argument("--a", required=True, metavar="ORDER:GID:TWISTFILE",
                       help="first instance; TWISTFILE is a JSON image array "
                            "or the literal 'identity'")
    p_iso.add_argument("--b", required=True, metavar="ORDER:GID:TWISTFILE",
                       help="second instance")
    p_iso.add_argument("--catalog", type=str, help="catalog file path")
    p_iso.add_argument("--json", type=str, help="write verdict and witness as JSON")
    p_iso.set_defaults(func=_cmd_iso)

    p_validate = sub.add_parser("validate", help="validate catalog data")
    p_validate.add_argument("--order", type=int,
                            help="single order (default: all shipped orders)")
    p_validate.add_argument("--catalog", type=str, help="catalog file path")
    p_validate.set_defaults(func=_cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
