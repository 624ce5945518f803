"""Budget sweeps tracing the time/memory trade-off frontier.

A sweep runs one exact min-time solve per budget. The whole-network regime
budgets the footprint sum; the workspace regime budgets the largest single
layer instead. Frontier points report achieved values, not budgets:
budgets are grid artifacts, achieved points are what a device actually
pays.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .ilp import SolveStatus
from .model import NetworkProfile, Selection
from .profile_io import SCHEMA_VERSION
from .strategies import solve_min_time


@dataclass(frozen=True)
class FrontierPoint:
    """One sweep result: the budget asked for and the optimum achieved."""

    budget: int
    status: SolveStatus
    selection: Optional[Selection]
    achieved_memory: Optional[int]
    achieved_time: Optional[int]

    @property
    def objective(self) -> Optional[int]:
        return self.achieved_time


def sweep_memory_budget(
    profile: NetworkProfile,
    budgets: Sequence[int],
    *,
    workspace: bool = False,
    time_limit: Optional[float] = None,
) -> list[FrontierPoint]:
    """Min-time solve per budget; infeasible budgets are kept, flagged by status."""
    if not budgets:
        raise ValueError("need at least one budget")
    points = []
    for budget in sorted(budgets):
        if workspace:
            outcome = solve_min_time(profile, workspace_budget=budget, time_limit=time_limit)
        else:
            outcome = solve_min_time(profile, memory_budget=budget, time_limit=time_limit)
        achieved_mem = achieved_time = None
        if outcome.selection is not None:
            breakdown = outcome.selection.breakdown
            achieved_mem = (
                breakdown.workspace_max_bytes if workspace else breakdown.memory_sum_bytes
            )
            achieved_time = breakdown.total_time_us
        points.append(
            FrontierPoint(
                budget=budget,
                status=outcome.status,
                selection=outcome.selection,
                achieved_memory=achieved_mem,
                achieved_time=achieved_time,
            )
        )
    return points


def extract_frontier(points: Sequence[FrontierPoint]) -> list[FrontierPoint]:
    """Proven-optimal points not dominated in (achieved memory, achieved time).

    Sorted by achieved memory ascending; time is strictly decreasing along
    the result. Exact duplicates collapse to the lowest-budget point.
    """
    solved = [p for p in points if p.status is SolveStatus.OPTIMAL]
    kept = []
    seen = set()
    for point in solved:
        coords = (point.achieved_memory, point.achieved_time)
        if coords in seen:
            continue
        dominated = False
        for other in solved:
            if (
                other.achieved_memory <= point.achieved_memory
                and other.achieved_time <= point.achieved_time
                and (
                    other.achieved_memory < point.achieved_memory
                    or other.achieved_time < point.achieved_time
                )
            ):
                dominated = True
                break
        if not dominated:
            kept.append(point)
            seen.add(coords)
    kept.sort(key=lambda p: p.achieved_memory)
    return kept


def auto_grid(profile: NetworkProfile, k: int, *, workspace: bool = False) -> list[int]:
    """k budgets spanning the achievable range, endpoints inclusive.

    Whole-network mode spans [sum of per-layer minima, sum of per-layer
    maxima]; workspace mode spans the per-layer max range instead.
    """
    if k < 1:
        raise ValueError("need at least one grid point")
    per_layer_min = [min(c.memory_cost for c in layer.candidates) for layer in profile.layers]
    per_layer_max = [max(c.memory_cost for c in layer.candidates) for layer in profile.layers]
    if workspace:
        lo = max(per_layer_min, default=0)
        hi = max(per_layer_max, default=0)
    else:
        lo = sum(per_layer_min)
        hi = sum(per_layer_max)
    if k == 1:
        return [hi]
    return [lo + (step * (hi - lo)) // (k - 1) for step in range(k)]


FRONTIER_CSV_HEADER = ["budget", "achieved_memory_bytes", "achieved_time_us", "status", "selection_id"]


def write_frontier_csv(points: Sequence[FrontierPoint], csv_path, selections_path, network: str) -> None:
    """Frontier CSV plus a sidecar JSON holding the selections by id."""
    selections = {}
    with Path(csv_path).open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(FRONTIER_CSV_HEADER)
        for i, point in enumerate(points):
            selection_id = ""
            if point.selection is not None:
                selection_id = f"s{i:03d}"
                selections[selection_id] = {
                    "budget": point.budget,
                    "assignment": dict(point.selection.assignment),
                    "breakdown": point.selection.breakdown.as_dict(),
                }
            writer.writerow(
                [
                    point.budget,
                    point.achieved_memory if point.achieved_memory is not None else "",
                    point.achieved_time if point.achieved_time is not None else "",
                    point.status.value,
                    selection_id,
                ]
            )
    doc = {"schema": SCHEMA_VERSION, "network": network, "selections": selections}
    Path(selections_path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
