"""Command-line interface: validate, solve, score, sweep, compare, plan, gen.

Exit codes: 0 success, 1 input error, 2 infeasible, 3 timed out.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import pareto, planner, strategies
from .errors import PrimeselError
from .ilp import SolveStatus
from .model import validate_profile
from .profile_io import (
    load_profile,
    load_selection,
    save_profile,
    serialize_selection,
)
from .synth import generate_profile

_STATUS_EXIT = {SolveStatus.OPTIMAL: 0, SolveStatus.INFEASIBLE: 2, SolveStatus.TIMED_OUT: 3}

_BYTE_SUFFIXES = {"KiB": 1024, "MiB": 1024**2}
_DURATION_SUFFIXES = {"us": 1, "ms": 1000, "s": 1_000_000}


def parse_bytes(text: str) -> int:
    """Byte counts with optional binary suffixes, e.g. '64KiB' or '4MiB'."""
    for suffix, factor in _BYTE_SUFFIXES.items():
        if text.endswith(suffix):
            value = float(text[: -len(suffix)]) * factor
            break
    else:
        value = float(text) if "." in text else int(text)
    result = int(round(value))
    if result < 0:
        raise ValueError(f"byte size must be nonnegative: {text!r}")
    return result


def parse_duration_us(text: str) -> int:
    """Durations in microseconds with optional 'us', 'ms' or 's' suffixes."""
    for suffix in ("us", "ms", "s"):
        if text.endswith(suffix):
            value = float(text[: -len(suffix)]) * _DURATION_SUFFIXES[suffix]
            break
    else:
        value = float(text) if "." in text else int(text)
    result = int(round(value))
    if result < 0:
        raise ValueError(f"duration must be nonnegative: {text!r}")
    return result


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primesel",
        description="Select per-layer convolution primitives under time and memory budgets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a profile for consistency")
    p.add_argument("profile")

    p = sub.add_parser("solve", help="solve one mode, optionally under budgets")
    p.add_argument("profile")
    p.add_argument("--mode", choices=["min-time", "min-memory", "min-workspace"], default="min-time")
    p.add_argument("--memory-budget", type=parse_bytes, help="footprint-sum cap (min-time only)")
    p.add_argument("--workspace-budget", type=parse_bytes, help="per-layer footprint cap (min-time only)")
    p.add_argument("--time-budget", type=parse_duration_us, help="total-time cap (memory modes only)")
    p.add_argument("--time-limit", type=float, help="solver wall-clock limit in seconds")
    p.add_argument("--out", help="selection JSON path (default: stdout)")
    p.add_argument("--dump-lp", help="also write the built program in LP format")

    p = sub.add_parser("score", help="evaluate an existing selection against a profile")
    p.add_argument("profile")
    p.add_argument("selection")

    p = sub.add_parser("sweep", help="trace the time/memory frontier over a budget grid")
    p.add_argument("profile")
    p.add_argument("--points", type=int, default=20, help="automatic grid size")
    p.add_argument("--budgets", help="comma-separated explicit budgets (overrides --points)")
    p.add_argument("--workspace", action="store_true", help="budget the largest layer, not the sum")
    p.add_argument("--out", required=True, help="frontier CSV path")
    p.add_argument("--selections", help="sidecar selections JSON (default: <out>.selections.json)")

    p = sub.add_parser("compare", help="exact solver versus greedy across budgets")
    p.add_argument("profile")
    p.add_argument("--points", type=int, default=20)
    p.add_argument("--out", required=True, help="comparison CSV path")

    p = sub.add_parser("plan", help="buffer-flipping execution plan for a selection")
    p.add_argument("profile")
    p.add_argument("selection")
    p.add_argument("--out", help="plan JSON path (default: stdout)")

    p = sub.add_parser("gen", help="write a seeded synthetic profile")
    p.add_argument("--layers", type=int, required=True)
    p.add_argument("--candidates", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--topology", choices=["chain", "fork-join"], default="chain")
    p.add_argument("--name", help="profile name (default derived from shape and seed)")
    p.add_argument("--out", required=True)
    return parser


def _cmd_validate(args) -> int:
    profile = load_profile(args.profile)
    violations = validate_profile(profile)
    if violations:
        for violation in violations:
            print(violation, file=sys.stderr)
        return 1
    print("OK")
    return 0


def _cmd_solve(args) -> int:
    profile = load_profile(args.profile)
    if args.mode == "min-time":
        if args.time_budget is not None:
            print("min-time does not accept a time budget", file=sys.stderr)
            return 1
        outcome = strategies.solve_min_time(
            profile,
            memory_budget=args.memory_budget,
            workspace_budget=args.workspace_budget,
            time_limit=args.time_limit,
        )
    else:
        if args.memory_budget is not None or args.workspace_budget is not None:
            print(f"{args.mode} does not accept memory budgets", file=sys.stderr)
            return 1
        solver = (
            strategies.solve_min_memory if args.mode == "min-memory" else strategies.solve_min_workspace
        )
        outcome = solver(profile, time_budget=args.time_budget, time_limit=args.time_limit)

    if args.dump_lp:
        from .ilp import SolveMode, SolveRequest, build_problem, dump_lp

        request = SolveRequest(
            SolveMode(args.mode),
            memory_budget=args.memory_budget,
            time_budget=args.time_budget,
            workspace_budget=args.workspace_budget,
        )
        Path(args.dump_lp).write_text(dump_lp(build_problem(profile, request)), encoding="utf-8")

    text = serialize_selection(
        outcome.selection,
        network=profile.name,
        mode=args.mode,
        status=outcome.status.value,
        proof=outcome.proof,
    )
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if outcome.objective is not None:
        print(f"status={outcome.status.value} objective={outcome.objective}", file=sys.stderr)
    else:
        print(f"status={outcome.status.value}", file=sys.stderr)
    return _STATUS_EXIT[outcome.status]


def _cmd_score(args) -> int:
    from .costs import evaluate

    profile = load_profile(args.profile)
    doc = load_selection(args.selection)
    if doc["selection"] is None:
        print("selection file carries no assignment", file=sys.stderr)
        return 1
    breakdown = evaluate(profile, doc["selection"])
    import json

    print(json.dumps(breakdown.as_dict(), indent=2))
    return 0


def _parse_budget_list(text: str) -> list[int]:
    return [parse_bytes(part.strip()) for part in text.split(",") if part.strip()]


def _cmd_sweep(args) -> int:
    profile = load_profile(args.profile)
    if args.budgets:
        budgets = _parse_budget_list(args.budgets)
    else:
        budgets = pareto.auto_grid(profile, args.points, workspace=args.workspace)
    points = pareto.sweep_memory_budget(profile, budgets, workspace=args.workspace)
    selections_path = args.selections or f"{args.out}.selections.json"
    pareto.write_frontier_csv(points, args.out, selections_path, profile.name)
    solved = sum(1 for p in points if p.status is SolveStatus.OPTIMAL)
    print(f"{len(points)} budgets swept, {solved} optimal; frontier written to {args.out}")
    return 0


def _cmd_compare(args) -> int:
    profile = load_profile(args.profile)
    budgets = pareto.auto_grid(profile, args.points)
    report = strategies.compare(profile, budgets)
    with Path(args.out).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["budget", "ilp_time_us", "greedy_time_us", "speedup"])
        for row in report.rows:
            ilp = row.method("ilp")
            greedy = row.method("greedy")
            writer.writerow(
                [
                    row.budget,
                    ilp.breakdown.total_time_us if ilp.feasible else "",
                    greedy.breakdown.total_time_us if greedy.feasible else "",
                    row.speedups["greedy"] if row.speedups["greedy"] is not None else "",
                ]
            )
    print(f"comparison written to {args.out}")
    return 0


def _cmd_plan(args) -> int:
    profile = load_profile(args.profile)
    doc = load_selection(args.selection)
    if doc["selection"] is None:
        print("selection file carries no assignment", file=sys.stderr)
        return 1
    plan = planner.plan_execution(profile, doc["selection"])
    text = planner.plan_to_json(plan, profile.name)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_gen(args) -> int:
    if args.layers < 1 or args.candidates < 1:
        print("need at least one layer and one candidate", file=sys.stderr)
        return 1
    profile = generate_profile(
        layers=args.layers,
        candidates=args.candidates,
        seed=args.seed,
        topology=args.topology,
        name=args.name,
    )
    save_profile(profile, args.out)
    print(f"profile '{profile.name}' written to {args.out}")
    return 0


_HANDLERS = {
    "validate": _cmd_validate,
    "solve": _cmd_solve,
    "score": _cmd_score,
    "sweep": _cmd_sweep,
    "compare": _cmd_compare,
    "plan": _cmd_plan,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (PrimeselError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
