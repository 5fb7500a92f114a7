"""Command-line entry point wiring the library into complete workflows.

Exit codes: 0 success, 2 for anything wrong with the input or the flags,
1 for an internal failure.  Stdout carries plain-text summaries only;
machine-readable artifacts are written to the paths given by --report,
--out, --output and --log.  Every command is deterministic for a fixed
input, flag set, and seed.

VULNAUDIT_THREADS caps internal parallelism (0 or unset picks the CPU
count).  The current implementations are single-threaded, so the cap is
honored trivially; ``worker_count`` is the one place the policy lives.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from typing import Optional

from .cleaning import (
    CleaningScope,
    SplitProtocol,
    deduplicate,
    drop_incomplete,
    enforce_consistency,
    load_split,
    random_split,
    remove_cross_set_duplicates,
    save_removal_log,
    save_split,
    temporal_split,
)
from .clones import CloneConfig, CloneTier, cluster
from .corpus import AuditError, Label
from .ingestion import load_dataset, save_dataset, validate
from .metrics import UniquenessConvention, audit
from .review import (
    ReviewSheet,
    accuracy_score,
    cochran_sample_size,
    cohen_kappa,
    sample_for_review,
)
from .stats import kendall_tau, mann_whitney_u

_REVIEW_CONFIDENCE = 0.90
_REVIEW_MARGIN = 0.10


def worker_count() -> int:
    """Parallelism cap from VULNAUDIT_THREADS; 0 or unset means auto."""
    raw = os.environ.get("VULNAUDIT_THREADS", "0").strip() or "0"
    try:
        v = int(raw)
    except ValueError:
        raise ValueError(
            f"VULNAUDIT_THREADS must be an integer, got {raw!r}"
        ) from None
    if v < 0:
        raise ValueError("VULNAUDIT_THREADS must be >= 0")
    return v if v > 0 else (os.cpu_count() or 1)


def _clone_config(args) -> CloneConfig:
    return CloneConfig(
        multiset_threshold=args.type3_multiset,
        set_threshold=args.type3_set,
        min_tokens=args.min_tokens,
    )


def _cmd_audit(args) -> int:
    dataset = load_dataset(args.input)
    review = ReviewSheet.load(args.review) if args.review else None
    report = audit(
        dataset,
        config=_clone_config(args),
        review=review,
        convention=args.uniqueness_convention,
    )
    if args.report:
        report.save(args.report)
    for line in report.summary_lines():
        print(line)
    return 0


_CLEAN_OPS = ("dedup", "consistency", "completeness")


def _cmd_clean(args) -> int:
    ops = [o.strip() for o in args.ops.split(",") if o.strip()]
    if not ops:
        raise ValueError("--ops must name at least one operation")
    for o in ops:
        if o not in _CLEAN_OPS:
            raise ValueError(
                f"unknown cleaning op {o!r} (choose from {', '.join(_CLEAN_OPS)})"
            )
    scope = CleaningScope.ALL if args.scope == "all" else CleaningScope.TEST_ONLY
    if scope is CleaningScope.TEST_ONLY and not args.split:
        raise ValueError("--scope test-only requires --split")
    split = load_split(args.split) if args.split else None
    dataset = load_dataset(args.input)
    config = _clone_config(args)
    records = []
    for o in ops:
        if o == "dedup":
            dataset, recs = deduplicate(dataset, config=config)
        elif o == "consistency":
            dataset, recs = enforce_consistency(dataset, scope, split=split)
        else:
            dataset, recs = drop_incomplete(dataset)
        records.extend(recs)
        print(f"{o}: removed {len(recs)}")
    save_dataset(dataset, args.output)
    log_path = args.log or f"{args.output}.removals.jsonl"
    save_removal_log(records, log_path)
    print(f"kept {len(dataset)} samples; log: {log_path}")
    return 0


def _cmd_split(args) -> int:
    dataset = load_dataset(args.input)
    if args.protocol == SplitProtocol.RANDOM.value:
        split = random_split(dataset, args.seed)
    else:
        split = temporal_split(dataset)
    if args.dedup_cross_set:
        clusters = cluster(
            dataset,
            CloneTier.TYPE3,
            same_label_only=not args.label_agnostic,
            config=_clone_config(args),
        )
        split, records = remove_cross_set_duplicates(split, clusters)
        log_path = f"{args.out}.removals.jsonl"
        save_removal_log(records, log_path)
        print(f"cross-set duplicates removed from test: {len(records)}")
    save_split(split, args.out)
    print(
        f"train {len(split.train)} / validation {len(split.validation)}"
        f" / test {len(split.test)}"
    )
    return 0


def _cmd_review_sample(args) -> int:
    dataset = load_dataset(args.input)
    label: Optional[Label] = None if args.label == "any" else Label(args.label)
    matching = sum(1 for s in dataset if label is None or s.label is label)
    if matching == 0:
        raise ValueError("no samples match the requested label")
    n = args.n
    if n is None:
        n = cochran_sample_size(
            _REVIEW_CONFIDENCE, _REVIEW_MARGIN, population=matching
        )
    sheet = sample_for_review(dataset, label, n, args.seed)
    sheet.save(args.out)
    print(f"sampled {n} of {matching} matching samples -> {args.out}")
    return 0


def _cmd_review_kappa(args) -> int:
    sheet = ReviewSheet.load(args.sheet)
    print(f"kappa {cohen_kappa(sheet)}")
    return 0


def _cmd_review_score(args) -> int:
    sheet = ReviewSheet.load(args.sheet)
    score = accuracy_score(sheet)
    print(
        f"accuracy {score.value}"
        f" ({score.satisfied_count}/{score.total_count} correct)"
    )
    return 0


def _read_numbers(path) -> list[float]:
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    fields = [f for f in re.split(r"[,;\s]+", raw) if f]
    if not fields:
        raise ValueError(f"{path}: no numbers found")
    try:
        return [float(f) for f in fields]
    except ValueError:
        raise ValueError(f"{path}: expected numbers separated by , ; or space") from None


def _cmd_stats(args) -> int:
    a = _read_numbers(args.a)
    b = _read_numbers(args.b)
    if args.test == "mwu":
        u, p = mann_whitney_u(a, b)
        print(f"U {u}")
    else:
        tau, p = kendall_tau(a, b)
        print(f"tau {tau}")
    print(f"p {p}")
    return 0


def _cmd_validate(args) -> int:
    dataset = load_dataset(args.input)
    for line in validate(dataset).lines():
        print(line)
    return 0


def _add_clone_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--type3-multiset", type=float, default=0.8,
                   help="near-miss token-bag similarity floor")
    p.add_argument("--type3-set", type=float, default=0.7,
                   help="near-miss identifier/literal set similarity floor")
    p.add_argument("--min-tokens", type=int, default=5,
                   help="shortest function considered for cloning")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vulnaudit",
        description="Audit, clean, split and review vulnerability datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="score a dataset on the quality attributes")
    p.add_argument("--input", required=True)
    p.add_argument("--report", help="write the full JSON report here")
    _add_clone_flags(p)
    p.add_argument(
        "--uniqueness-convention",
        choices=UniquenessConvention.CHOICES,
        default=UniquenessConvention.MEMBER,
    )
    p.add_argument("--review", help="adjudicated review sheet for the accuracy score")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("clean", help="apply cleaning operations in the listed order")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--ops", default="dedup,consistency,completeness",
                   help="comma-separated: dedup, consistency, completeness")
    p.add_argument("--scope", choices=("all", "test-only"), default="all",
                   help="test-only limits consistency removals to the split's test ids")
    p.add_argument("--split", help="split file, required for --scope test-only")
    p.add_argument("--log", help="removal log path (default: <output>.removals.jsonl)")
    _add_clone_flags(p)
    p.set_defaults(func=_cmd_clean)

    p = sub.add_parser("split", help="assign train/validation/test roles")
    p.add_argument("--input", required=True)
    p.add_argument("--protocol", choices=[pr.value for pr in SplitProtocol],
                   required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dedup-cross-set", action="store_true",
                   help="drop test ids sharing a clone cluster with train/validation")
    p.add_argument("--label-agnostic", action="store_true",
                   help="cross-set clone clusters may span labels")
    p.add_argument("--out", required=True)
    _add_clone_flags(p)
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("review-sample", help="draw a seeded sample sheet for manual label review")
    p.add_argument("--input", required=True)
    p.add_argument("--label", choices=("vulnerable", "non_vulnerable", "any"),
                   default="any")
    p.add_argument("--n", type=int,
                   help="sample size (default: 90%% confidence, 10%% margin formula)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_review_sample)

    p = sub.add_parser("review-kappa", help="inter-rater agreement of a filled sheet")
    p.add_argument("--sheet", required=True)
    p.set_defaults(func=_cmd_review_kappa)

    p = sub.add_parser("review-score", help="accuracy score from an adjudicated sheet")
    p.add_argument("--sheet", required=True)
    p.set_defaults(func=_cmd_review_score)

    p = sub.add_parser("stats", help="nonparametric tests over two number files")
    p.add_argument("--test", choices=("mwu", "kendall"), required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("validate", help="basic hygiene counts for a dataset file")
    p.add_argument("--input", required=True)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (AuditError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - safety net
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main(sys.argv[1:]))
