"""Command-line front door: audit rankings, build tables, rank, experiment.

Every command writes machine-readable output to stdout (CSV by default,
``--json`` for a JSON document) and is deterministic given its flags and
seed: identical invocations produce byte-identical stdout.

Exit codes: 0 ok; 1 unfair or infeasible verdict (under --strict, or an
infeasible significance adjustment); 2 usage error; 3 data error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .adjustment import AdjustmentResult, simulate_rejection_rate
from .baselines import feldman_repair, yang_stoyanovich_generate
from .candidates import CandidatePool
from .experiment import (
    DataLoadError,
    DatasetSpec,
    load_candidates,
    load_ranking,
    load_spec,
    run_experiment,
)
from .fairness import compute_mtable, verify_ranked_group_fairness
from .metrics import _pool_index
from .ranker import InfeasibleRankingError, color_blind_topk, fair_topk
from .store import cached_adjustment, load_mtable, resolve_cache_dir, save_mtable

EXIT_OK = 0
EXIT_VERDICT = 1
EXIT_USAGE = 2
EXIT_DATA = 3

_EXIT_HELP = (
    "exit codes: 0 ok; 1 unfair/infeasible verdict (--strict contexts and "
    "infeasible adjustments); 2 usage error; 3 data error"
)

XING_COLUMNS = ("query", "id", "gender", "work_months", "edu_months", "views")


def _prob(value: float) -> str:
    return f"{float(value):.6f}"


def _score(value: float) -> str:
    # shortest round-trip form: exact, stable, and readable for integers
    return repr(float(value))


def _write_csv(header, rows) -> None:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def _write_json(payload) -> None:
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _mtable_with_cache(k, p, alpha_adj, cache_dir):
    if cache_dir is not None:
        hit = load_mtable(cache_dir, k, p, alpha_adj)
        if hit is not None:
            return hit
    table = compute_mtable(k, p, alpha_adj)
    if cache_dir is not None:
        save_mtable(table, cache_dir)
    return table


def _adjustment_dict(result: AdjustmentResult) -> dict:
    return {
        "k": result.k,
        "p": round(result.p, 6),
        "alpha_target": round(result.alpha_target, 6),
        "alpha_adj": round(result.alpha_adj, 6),
        "achieved_rejection": round(result.achieved_rejection_prob, 6),
        "feasible": result.feasible,
    }


# ---------------------------------------------------------------- commands


def cmd_mtable(args) -> int:
    cache_dir = resolve_cache_dir(args.cache_dir)
    adjustment = None
    alpha = args.alpha
    if args.adjust:
        adjustment = cached_adjustment(args.k, args.p, args.alpha, cache_dir)
        if not adjustment.feasible:
            print(
                f"error: no feasible alpha_adj for k={args.k} p={_prob(args.p)} "
                f"alpha={_prob(args.alpha)}: best achievable rejection "
                f"{_prob(adjustment.achieved_rejection_prob)} at "
                f"alpha_adj={_prob(adjustment.alpha_adj)}",
                file=sys.stderr,
            )
            return EXIT_VERDICT
        alpha = adjustment.alpha_adj
    table = _mtable_with_cache(args.k, args.p, alpha, cache_dir)
    if args.json:
        payload = {
            "k": args.k,
            "p": round(args.p, 6),
            "alpha": round(args.alpha, 6),
            "minima": [int(m) for m in table.minima],
        }
        if adjustment is not None:
            payload["adjustment"] = _adjustment_dict(adjustment)
        _write_json(payload)
        return EXIT_OK
    if adjustment is not None:
        print(
            f"# alpha_adj={_prob(adjustment.alpha_adj)} "
            f"achieved={_prob(adjustment.achieved_rejection_prob)} feasible=true"
        )
    _write_csv(
        ("position", "minimum"),
        ((i, int(m)) for i, m in enumerate(table.minima, start=1)),
    )
    return EXIT_OK


def cmd_adjust(args) -> int:
    cache_dir = resolve_cache_dir(args.cache_dir)
    result = cached_adjustment(args.k, args.p, args.alpha, cache_dir)
    if args.json:
        _write_json(_adjustment_dict(result))
    else:
        _write_csv(
            ("k", "p", "alpha", "alpha_adj", "achieved_rejection", "feasible"),
            [
                (
                    result.k,
                    _prob(result.p),
                    _prob(result.alpha_target),
                    _prob(result.alpha_adj),
                    _prob(result.achieved_rejection_prob),
                    "true" if result.feasible else "false",
                )
            ],
        )
    return EXIT_OK if result.feasible else EXIT_VERDICT


def cmd_verify(args) -> int:
    ranking = load_ranking(sys.stdin if args.input == "-" else args.input)
    alpha = args.alpha
    if args.adjusted:
        cache_dir = resolve_cache_dir(args.cache_dir)
        alpha = cached_adjustment(len(ranking), args.p, args.alpha, cache_dir).alpha_adj
    verdict = verify_ranked_group_fairness(ranking, args.p, alpha)
    if args.json:
        _write_json(
            {
                "fair": verdict.fair,
                "k": verdict.k,
                "alpha_used": round(alpha, 6),
                "first_violation": verdict.first_violation,
                "required": verdict.required,
                "observed": verdict.observed,
            }
        )
    else:
        _write_csv(
            ("fair", "k", "alpha_used", "first_violation", "required", "observed"),
            [
                (
                    "true" if verdict.fair else "false",
                    verdict.k,
                    _prob(alpha),
                    "" if verdict.first_violation is None else verdict.first_violation,
                    "" if verdict.required is None else verdict.required,
                    "" if verdict.observed is None else verdict.observed,
                )
            ],
        )
    if args.strict and not verdict.fair:
        return EXIT_VERDICT
    return EXIT_OK


def cmd_rank(args) -> int:
    if args.input is None:
        generated = yang_stoyanovich_generate(args.k, args.p or 0.5, args.seed)
        pool = CandidatePool(generated.ids, generated.scores, generated.protected)
    else:
        spec = DatasetSpec(name=Path(args.input).stem, path=args.input, k=args.k)
        pool = load_candidates(spec)

    if args.method == "fair":
        if args.p is None:
            raise ValueError("--p is required for --method fair")
        alpha_adj = args.alpha
        if not args.raw:
            cache_dir = resolve_cache_dir(args.cache_dir)
            alpha_adj = cached_adjustment(args.k, args.p, args.alpha, cache_dir).alpha_adj
        result = fair_topk(pool, args.k, args.p, alpha_adj, strict=args.strict)
        if result.satisfied_up_to < args.k:
            print(
                f"warning: protected supply exhausted; minimum counts hold only "
                f"through position {result.satisfied_up_to} of {args.k}",
                file=sys.stderr,
            )
        ranking = result.entries
    elif args.method == "feldman":
        ranking = color_blind_topk(feldman_repair(pool).pool, args.k)
    else:
        ranking = color_blind_topk(pool, args.k)

    # where each ranked candidate would sit in the color-blind order of the
    # original pool (1-based), so displacement is visible in the output
    full = color_blind_topk(pool, len(pool))
    reference_position = np.empty(len(pool), dtype=np.int64)
    reference_position[_pool_index(pool, full.ids)] = np.arange(1, len(pool) + 1)
    positions = reference_position[_pool_index(pool, ranking.ids)]

    if args.json:
        _write_json(
            [
                {
                    "position": i + 1,
                    "id": ranking.ids[i].item(),
                    "score": float(ranking.scores[i]),
                    "protected": bool(ranking.protected[i]),
                    "color_blind_position": int(positions[i]),
                }
                for i in range(len(ranking))
            ]
        )
    else:
        _write_csv(
            ("position", "id", "score", "protected", "color_blind_position"),
            (
                (
                    i + 1,
                    ranking.ids[i].item(),
                    _score(ranking.scores[i]),
                    int(ranking.protected[i]),
                    int(positions[i]),
                )
                for i in range(len(ranking))
            ),
        )
    return EXIT_OK


def cmd_simulate(args) -> int:
    result = simulate_rejection_rate(
        args.k, args.p, args.p, args.alpha_adj, args.trials, args.seed
    )
    if args.json:
        _write_json(
            {
                "k": args.k,
                "p": round(args.p, 6),
                "alpha_adj": round(args.alpha_adj, 6),
                "trials": result.trials,
                "rejections": result.rejections,
                "estimate": round(result.estimate, 6),
                "stderr": round(result.stderr, 6),
            }
        )
    else:
        _write_csv(
            ("k", "p", "alpha_adj", "trials", "rejections", "estimate", "stderr"),
            [
                (
                    args.k,
                    _prob(args.p),
                    _prob(args.alpha_adj),
                    result.trials,
                    result.rejections,
                    _prob(result.estimate),
                    _prob(result.stderr),
                )
            ],
        )
    return EXIT_OK


def cmd_experiment(args) -> int:
    spec = load_spec(args.config)
    cache_dir = resolve_cache_dir(args.cache_dir)
    report = run_experiment(spec, cache_dir, strict=args.strict)
    if args.json:
        _write_json(
            [
                {
                    "dataset": row.dataset,
                    "method": row.method,
                    "p": round(row.p, 6),
                    "pct_protected_output": round(row.report.protected_share, 6),
                    "ndcg": round(row.report.ndcg, 6),
                    "ordering_utility_loss": round(row.report.ordering_utility_loss, 6),
                    "rank_drop": row.report.max_rank_drop,
                    "selection_utility_loss": round(row.report.selection_utility_loss, 6),
                }
                for row in report.rows
            ]
        )
    else:
        report.to_csv(sys.stdout)
    return EXIT_OK


def cmd_prep_xing(args) -> int:
    path = Path(args.input)
    if not path.exists():
        raise DataLoadError(f"{path}: no such file")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in XING_COLUMNS if c not in header]
        if missing:
            raise DataLoadError(f"{path}: missing columns {missing}")
        rows = [row for row in reader if args.query is None or row["query"] == args.query]
    queries = sorted({row["query"] for row in rows})
    if not rows:
        raise DataLoadError(f"{path}: no rows" + (f" for query {args.query!r}" if args.query else ""))
    if len(queries) > 1:
        raise DataLoadError(
            f"{path}: multiple queries {queries}; pick one with --query"
        )
    out = []
    for number, row in enumerate(rows, start=2):
        try:
            score = (int(row["work_months"]) + int(row["edu_months"])) * int(row["views"])
        except (TypeError, ValueError):
            raise DataLoadError(f"{path}: row {number}: unparseable profile columns") from None
        out.append((row["id"], score, int(row["gender"] == args.protected_gender)))
    if args.json:
        _write_json(
            [{"id": i, "score": s, "protected": bool(g)} for i, s, g in out]
        )
    else:
        _write_csv(("id", "score", "protected"), out)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _add_common(parser, cache=True):
    parser.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    if cache:
        parser.add_argument(
            "--cache-dir",
            default=None,
            help="cache directory for tables/adjustments "
            "(default: $FAIR_TOPK_CACHE_DIR if set, else no cache)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fair-topk",
        description="Fairness-constrained top-k ranking toolkit.",
        epilog=_EXIT_HELP,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    s = sub.add_parser(
        "mtable",
        help="print per-position minimum protected counts",
        description="Minimum number of protected candidates required at each "
        "ranking prefix 1..k for the binomial test at the given significance.",
        epilog=_EXIT_HELP,
    )
    s.add_argument("--k", type=int, required=True, help="ranking length")
    s.add_argument("--p", type=float, required=True, help="target protected proportion")
    s.add_argument("--alpha", type=float, required=True, help="significance level")
    s.add_argument(
        "--adjust",
        action="store_true",
        help="correct alpha for the k dependent prefix tests first "
        "(exit 1 with a diagnostic if no feasible correction exists)",
    )
    _add_common(s)
    s.set_defaults(handler=cmd_mtable)

    s = sub.add_parser(
        "adjust",
        help="calibrate the per-test significance for a k-prefix test",
        description="Search for the per-test alpha_adj whose overall rejection "
        "probability for a fair process matches the target alpha. Exit 1 when "
        "the step structure of the test leaves the target unreachable "
        "(the conservative alpha_adj is still printed).",
        epilog=_EXIT_HELP,
    )
    s.add_argument("--k", type=int, required=True, help="ranking length")
    s.add_argument("--p", type=float, required=True, help="target protected proportion")
    s.add_argument("--alpha", type=float, required=True, help="overall target significance")
    _add_common(s)
    s.set_defaults(handler=cmd_adjust)

    s = sub.add_parser(
        "verify",
        help="test a ranking for ranked group fairness",
        description="Read an ordered ranking CSV (columns id,protected and "
        "optional score; '-' for stdin) and test every prefix against the "
        "minimum-count table. By default alpha is used as-is (--raw); with "
        "--adjusted it is first corrected for the k dependent prefix tests.",
        epilog=_EXIT_HELP,
    )
    s.add_argument("input", help="ranking CSV path, or - for stdin")
    s.add_argument("--p", type=float, required=True, help="target protected proportion")
    s.add_argument("--alpha", type=float, default=0.1, help="significance level (default 0.1)")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument(
        "--adjusted", action="store_true", help="correct alpha for multiple tests first"
    )
    mode.add_argument(
        "--raw",
        action="store_true",
        help="use alpha directly per prefix (default)",
    )
    s.add_argument(
        "--strict", action="store_true", help="exit 1 when the ranking is unfair"
    )
    _add_common(s)
    s.set_defaults(handler=cmd_verify)

    s = sub.add_parser(
        "rank",
        help="produce a top-k ranking from a candidate pool",
        description="Rank a candidate CSV (columns id,score,protected; higher "
        "score is better) with the chosen method. Without an input file a "
        "synthetic pool of k candidates with descending scores and seeded "
        "Bernoulli(p) protected flags is generated. Output column "
        "color_blind_position locates each candidate in the pool's unconstrained "
        "order, so displacement is visible. For --method fair, --alpha is the "
        "overall target and is corrected for multiple tests unless --raw.",
        epilog=_EXIT_HELP,
    )
    s.add_argument("input", nargs="?", default=None, help="candidate CSV (omit for synthetic)")
    s.add_argument("--k", type=int, required=True, help="ranking length")
    s.add_argument("--p", type=float, default=None, help="target protected proportion")
    s.add_argument("--alpha", type=float, default=0.1, help="significance level (default 0.1)")
    s.add_argument(
        "--method",
        choices=("fair", "colorblind", "feldman"),
        default="fair",
        help="ranking method (default fair)",
    )
    s.add_argument(
        "--raw",
        action="store_true",
        help="pass --alpha straight to the per-prefix test without correction",
    )
    s.add_argument(
        "--strict",
        action="store_true",
        help="exit 1 when the protected supply cannot meet the minimum counts",
    )
    s.add_argument("--seed", type=int, default=0, help="seed for the synthetic pool")
    _add_common(s)
    s.set_defaults(handler=cmd_rank)

    s = sub.add_parser(
        "simulate",
        help="Monte Carlo rejection rate of the fairness test",
        description="Generate seeded random rankings (protected flags drawn "
        "Bernoulli(p) per position) and report how often the per-prefix test "
        "at alpha_adj rejects them.",
        epilog=_EXIT_HELP,
    )
    s.add_argument("--k", type=int, required=True, help="ranking length")
    s.add_argument("--p", type=float, required=True, help="generator and test proportion")
    s.add_argument("--alpha-adj", type=float, required=True, help="per-test significance")
    s.add_argument("--trials", type=int, default=10000, help="number of rankings (default 10000)")
    s.add_argument("--seed", type=int, default=0, help="base seed (default 0)")
    _add_common(s, cache=False)
    s.set_defaults(handler=cmd_simulate)

    s = sub.add_parser(
        "experiment",
        help="run the ranked-method comparison for a dataset config",
        description="Read a YAML/JSON dataset config, rank its pool with the "
        "color-blind, fairness-constrained, and quantile-repair methods across "
        "the config's p grid, and print one metrics row per (method, p).",
        epilog=_EXIT_HELP,
    )
    s.add_argument("config", help="dataset config file (.yaml/.yml/.json)")
    s.add_argument(
        "--strict",
        action="store_true",
        help="exit 1 if any grid cell cannot meet its minimum counts",
    )
    _add_common(s)
    s.set_defaults(handler=cmd_experiment)

    s = sub.add_parser(
        "prep-xing",
        help="derive candidate scores from job-platform profile columns",
        description="Turn a profile table (columns query,id,gender,work_months,"
        "edu_months,views) into the minimum candidate schema, scoring each "
        "profile as (work_months + edu_months) * views. The table must hold "
        "a single query; pick one with --query if it holds several.",
        epilog=_EXIT_HELP,
    )
    s.add_argument("input", help="profile CSV path")
    s.add_argument("--query", default=None, help="keep only rows for this query")
    s.add_argument(
        "--protected-gender",
        default="female",
        help="gender value marking the protected group (default female)",
    )
    _add_common(s, cache=False)
    s.set_defaults(handler=cmd_prep_xing)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    try:
        return args.handler(args)
    except InfeasibleRankingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERDICT
    except DataLoadError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
