"""Command-line interface. Thin wrapper over the library: every subcommand
parses files, calls one engine function, and prints or writes the result.

Exit codes: 0 success, 1 domain error (bad data, unresolvable path, hiding
refusal), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FilePath

from .dataset import DataError, generate, parse_csv, parse_rules, write_csv
from .hiding import (
    HOLD_BACK,
    HidingError,
    STRATEGIES,
    hide,
    per_leaf_cost,
)
from .induction import (
    TreeError,
    extract_rules,
    format_path,
    format_rule,
    induce,
    parse_path,
    parse_rule_text,
    similarity,
    tree_from_json,
    tree_to_json,
)
from .oracle import verify_hidden


def _read(path: str) -> str:
    return FilePath(path).read_text(encoding="utf-8")


def _emit(text: str, out: str | None) -> None:
    if out:
        FilePath(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_generate(args) -> int:
    rules = parse_rules(_read(args.rules))
    dataset = generate(rules, args.count, args.seed)
    _emit(write_csv(dataset), args.out)
    return 0


def _cmd_induce(args) -> int:
    tree = induce(parse_csv(_read(args.data)))
    _emit(tree_to_json(tree), args.out)
    return 0


def _cmd_rules(args) -> int:
    tree = induce(parse_csv(_read(args.data)))
    for rule in extract_rules(tree):
        sys.stdout.write(format_rule(tree.schema, rule) + "\n")
    return 0


def _cmd_hide(args) -> int:
    dataset = parse_csv(_read(args.data))
    requests = [parse_path(dataset.schema, leaf) for leaf in args.leaf]
    sanitized, report = hide(dataset, requests, args.strategy, args.seed)
    _emit(write_csv(sanitized), args.out)
    report_json = json.dumps(report.to_json_dict(dataset.schema), indent=2) + "\n"
    if args.report:
        FilePath(args.report).write_text(report_json, encoding="utf-8")
    elif args.out:
        # CSV went to a file; the report is still wanted somewhere visible.
        sys.stdout.write(report_json)
    for warning in report.warnings:
        sys.stderr.write(f"warning: {warning}\n")
    return 0


def _cmd_cost_report(args) -> int:
    dataset = parse_csv(_read(args.data))
    report = per_leaf_cost(dataset, args.strategy, args.seed)
    if args.json:
        sys.stdout.write(
            json.dumps(report.to_json_dict(dataset.schema), indent=2) + "\n"
        )
        return 0
    for row in report.rows:
        path = format_path(dataset.schema, row.rule.path) or "(root)"
        if row.growth is None:
            sys.stdout.write(f"{path}\t{row.rule.label}\tskipped: {row.error}\n")
        else:
            sys.stdout.write(f"{path}\t{row.rule.label}\t{row.growth:.4f}\n")
    sys.stdout.write(
        f"mean={report.mean:.4f} min={report.minimum:.4f} max={report.maximum:.4f}\n"
    )
    return 0


def _cmd_compare(args) -> int:
    first = tree_from_json(_read(args.first))
    second = tree_from_json(_read(args.second))
    sys.stdout.write(f"{similarity(first, second):.6f}\n")
    return 0


def _cmd_verify(args) -> int:
    original = parse_csv(_read(args.original))
    sanitized = parse_csv(_read(args.sanitized))
    rule = parse_rule_text(original.schema, args.rule)
    if verify_hidden(original, sanitized, rule):
        sys.stdout.write("hidden\n")
        return 0
    sys.stdout.write("visible\n")
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rulehide",
        description="Hide decision-tree rules by relabeling and augmenting data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a dataset from a rule file")
    p.add_argument("--rules", required=True, help="rule file path")
    p.add_argument("--count", required=True, type=int, help="instances to generate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("induce", help="induce a tree and print it as JSON")
    p.add_argument("--data", required=True, help="dataset CSV path")
    p.add_argument("--out", help="output JSON path (default stdout)")
    p.set_defaults(func=_cmd_induce)

    p = sub.add_parser("rules", help="list the induced tree's rules")
    p.add_argument("--data", required=True)
    p.set_defaults(func=_cmd_rules)

    p = sub.add_parser("hide", help="hide leaves and emit the sanitized CSV")
    p.add_argument("--data", required=True)
    p.add_argument(
        "--leaf",
        action="append",
        required=True,
        help="leaf path like a1=t/a2=f (repeatable)",
    )
    p.add_argument("--strategy", choices=STRATEGIES, default=HOLD_BACK)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="sanitized CSV path (default stdout)")
    p.add_argument("--report", help="write the report JSON here")
    p.set_defaults(func=_cmd_hide)

    p = sub.add_parser("cost-report", help="growth ratio of hiding each leaf")
    p.add_argument("--data", required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default=HOLD_BACK)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.set_defaults(func=_cmd_cost_report)

    p = sub.add_parser("compare", help="similarity of two trees (JSON files)")
    p.add_argument("--first", required=True, help="tree JSON path")
    p.add_argument("--second", required=True, help="tree JSON path")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("verify", help="check a rule is gone from a sanitized set")
    p.add_argument("--original", required=True)
    p.add_argument("--sanitized", required=True)
    p.add_argument("--rule", required=True, help="rule like 'a1=t/a2=f => p'")
    p.set_defaults(func=_cmd_verify)

    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse arguments and execute; returns the exit code instead of exiting."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (DataError, TreeError, HidingError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
