"""High-level solve modes, baselines, and the brute-force verification oracle."""

from __future__ import annotations

import itertools
import math
import time as _time
from dataclasses import dataclass
from typing import Mapping, Optional

from .costs import evaluate
from .errors import CapExceededError, InfeasibleError, InvalidProfileError, MissingFamilyError
from .ilp import (
    IlpProblem,
    SolveMode,
    SolveOutcome,
    SolveRequest,
    SolveStats,
    SolveStatus,
    build_problem,
    solve_bnb,
)
from .model import NetworkProfile, ObjectiveBreakdown, Selection


def solve_min_time(
    profile: NetworkProfile,
    memory_budget: Optional[int] = None,
    *,
    workspace_budget: Optional[int] = None,
    time_limit: Optional[float] = None,
) -> SolveOutcome:
    """Fastest selection, optionally under a footprint-sum or per-layer cap.

    With no budget this is the performance-only optimum. The greedy result
    is passed to the solver as a warm start when a memory budget is set.
    """
    request = SolveRequest(
        SolveMode.MIN_TIME,
        memory_budget=memory_budget,
        workspace_budget=workspace_budget,
        time_limit=time_limit,
    )
    problem = build_problem(profile, request)
    seeds = []
    if memory_budget is not None:
        try:
            seeds.append(solve_greedy(profile, memory_budget))
        except InfeasibleError:
            pass
    return solve_bnb(problem, seeds=seeds)


def solve_min_memory(
    profile: NetworkProfile,
    time_budget: Optional[int] = None,
    *,
    time_limit: Optional[float] = None,
) -> SolveOutcome:
    """Smallest whole-network footprint, optionally under a time budget."""
    request = SolveRequest(SolveMode.MIN_MEMORY_SUM, time_budget=time_budget, time_limit=time_limit)
    return solve_bnb(build_problem(profile, request))


def solve_min_workspace(
    profile: NetworkProfile,
    time_budget: Optional[int] = None,
    *,
    time_limit: Optional[float] = None,
) -> SolveOutcome:
    """Smallest reusable workspace (max per-layer footprint), optionally timed."""
    request = SolveRequest(SolveMode.MIN_WORKSPACE, time_budget=time_budget, time_limit=time_limit)
    return solve_bnb(build_problem(profile, request))


def solve_greedy(profile: NetworkProfile, memory_budget: int) -> Selection:
    """Iterative-replacement baseline under a footprint-sum budget.

    Starts from the unconstrained fastest selection; while over budget, the
    layer with the largest chosen footprint is re-chosen to the fastest
    strictly smaller-memory candidate (transition costs included in what
    counts as fastest). Ties on the largest footprint go to the lowest
    layer index, ties on the replacement to the lowest candidate index.
    Raises InfeasibleError when no replacement chain reaches the budget.
    """
    base = solve_min_time(profile)
    if base.status is not SolveStatus.OPTIMAL:
        raise InfeasibleError("unconstrained min-time solve failed")
    layers = profile.layers
    m = len(layers)
    indices = [base.selection.assignment[layer.layer_id] for layer in layers]
    mem_sum = base.selection.breakdown.memory_sum_bytes
    if mem_sum <= memory_budget:
        return base.selection

    t = [[c.time_cost for c in layer.candidates] for layer in layers]
    mem = [[c.memory_cost for c in layer.candidates] for layer in layers]
    in_edges: list[list] = [[] for _ in range(m)]
    out_edges: list[list] = [[] for _ in range(m)]
    for e, edge in enumerate(profile.edges):
        u = profile.layer_index(edge.from_layer)
        v = profile.layer_index(edge.to_layer)
        rows = profile.transitions[e].cost
        in_edges[v].append((u, rows))
        out_edges[u].append((v, rows))

    def switch_time_delta(v: int, j_new: int) -> int:
        j_old = indices[v]
        delta = t[v][j_new] - t[v][j_old]
        for u, rows in in_edges[v]:
            delta += rows[indices[u]][j_new] - rows[indices[u]][j_old]
        for w, rows in out_edges[v]:
            delta += rows[j_new][indices[w]] - rows[j_old][indices[w]]
        return delta

    max_steps = sum(len(layer.candidates) for layer in layers) + 1
    for _ in range(max_steps):
        if mem_sum <= memory_budget:
            assignment = {layer.layer_id: j for layer, j in zip(layers, indices)}
            return Selection(assignment, evaluate(profile, assignment))
        by_footprint = sorted(range(m), key=lambda v: (-mem[v][indices[v]], v))
        swapped = False
        for v in by_footprint:
            chosen_mem = mem[v][indices[v]]
            best_j = None
            best_delta = None
            for j in range(len(t[v])):
                if mem[v][j] >= chosen_mem:
                    continue
                delta = switch_time_delta(v, j)
                if best_delta is None or delta < best_delta:
                    best_delta = delta
                    best_j = j
            if best_j is not None:
                mem_sum += mem[v][best_j] - chosen_mem
                indices[v] = best_j
                swapped = True
                break
        if not swapped:
            raise InfeasibleError(
                f"no selection of '{profile.name}' fits within {memory_budget} bytes"
            )
    raise RuntimeError("greedy replacement failed to terminate")


def common_families(profile: NetworkProfile) -> list[str]:
    """Id prefixes (before ':') present in every layer, sorted."""
    sets = [
        {cand.id.split(":", 1)[0] for cand in layer.candidates} for layer in profile.layers
    ]
    if not sets:
        return []
    return sorted(set.intersection(*sets))


def solve_uniform(profile: NetworkProfile, primitive_family: str) -> Selection:
    """Same primitive family in every layer; the classic framework default.

    Matches a candidate whose id equals the family or starts with
    ``family:``; the lowest matching index wins in each layer.
    """
    indices = []
    for layer in profile.layers:
        match = None
        for j, cand in enumerate(layer.candidates):
            if cand.id == primitive_family or cand.id.split(":", 1)[0] == primitive_family:
                match = j
                break
        if match is None:
            raise MissingFamilyError(primitive_family, layer.layer_id)
        indices.append(match)
    assignment = {layer.layer_id: j for layer, j in zip(profile.layers, indices)}
    return Selection(assignment, evaluate(profile, assignment))


def brute_force(
    profile: NetworkProfile, request: SolveRequest, cap: int = 10**6
) -> SolveOutcome:
    """Exhaustive enumeration; ground truth for the exact solvers.

    Raises CapExceededError when the assignment space exceeds ``cap``.
    """
    request.check()
    if profile.violations:
        raise InvalidProfileError(f"profile '{profile.name}' failed validation")
    t0 = _time.monotonic()
    sizes = [len(layer.candidates) for layer in profile.layers]
    space = math.prod(sizes)
    if space > cap:
        raise CapExceededError(f"{space} assignments exceed the cap of {cap}")
    m = len(sizes)
    layers = profile.layers
    t = [[c.time_cost for c in layer.candidates] for layer in layers]
    mem = [[c.memory_cost for c in layer.candidates] for layer in layers]
    edges = [
        (
            profile.layer_index(edge.from_layer),
            profile.layer_index(edge.to_layer),
            profile.transitions[e].cost,
        )
        for e, edge in enumerate(profile.edges)
    ]
    mode = request.mode
    best_val = None
    best_xs = None
    for xs in itertools.product(*[range(n) for n in sizes]):
        total_t = sum(t[p][xs[p]] for p in range(m))
        for u, v, rows in edges:
            total_t += rows[xs[u]][xs[v]]
        msum = sum(mem[p][xs[p]] for p in range(m))
        if request.memory_budget is not None and msum > request.memory_budget:
            continue
        if request.time_budget is not None and total_t > request.time_budget:
            continue
        wsmax = max((mem[p][xs[p]] for p in range(m)), default=0)
        if request.workspace_budget is not None and wsmax > request.workspace_budget:
            continue
        if mode is SolveMode.MIN_TIME:
            value = total_t
        elif mode is SolveMode.MIN_MEMORY_SUM:
            value = msum
        else:
            value = wsmax
        if best_val is None or value < best_val:
            best_val = value
            best_xs = xs
    wall = _time.monotonic() - t0
    if best_xs is None:
        return SolveOutcome(SolveStatus.INFEASIBLE, None, None, None, SolveStats(space, wall))
    assignment = {layer.layer_id: j for layer, j in zip(layers, best_xs)}
    selection = Selection(assignment, evaluate(profile, assignment))
    return SolveOutcome(
        SolveStatus.OPTIMAL, selection, best_val, best_val, SolveStats(space, wall)
    )


@dataclass(frozen=True)
class MethodResult:
    name: str
    feasible: bool
    breakdown: Optional[ObjectiveBreakdown]
    selection: Optional[Selection]


@dataclass(frozen=True)
class ComparisonRow:
    budget: int
    methods: tuple[MethodResult, ...]
    speedups: Mapping[str, Optional[float]]

    def method(self, name: str) -> MethodResult:
        for result in self.methods:
            if result.name == name:
                return result
        raise KeyError(name)


@dataclass(frozen=True)
class ComparisonReport:
    reference: str
    rows: tuple[ComparisonRow, ...]


def compare(profile: NetworkProfile, budget_grid) -> ComparisonReport:
    """Exact versus greedy total time across a memory-budget grid.

    Speedups are relative to the exact solver, so the exact solver's own
    ratio is 1.0 and greedy's ratio is at least 1.0 whenever both are
    feasible.
    """
    rows = []
    for budget in sorted(budget_grid):
        ilp = solve_min_time(profile, memory_budget=budget)
        if ilp.status is SolveStatus.OPTIMAL:
            ilp_result = MethodResult("ilp", True, ilp.selection.breakdown, ilp.selection)
        else:
            ilp_result = MethodResult("ilp", False, None, None)
        try:
            greedy_sel = solve_greedy(profile, budget)
            greedy_result = MethodResult("greedy", True, greedy_sel.breakdown, greedy_sel)
        except InfeasibleError:
            greedy_result = MethodResult("greedy", False, None, None)
        speedups: dict[str, Optional[float]] = {"ilp": None, "greedy": None}
        if ilp_result.feasible:
            speedups["ilp"] = 1.0
            if greedy_result.feasible:
                ilp_time = ilp_result.breakdown.total_time_us
                greedy_time = greedy_result.breakdown.total_time_us
                if ilp_time == 0:
                    speedups["greedy"] = 1.0 if greedy_time == 0 else math.inf
                else:
                    speedups["greedy"] = greedy_time / ilp_time
        rows.append(
            ComparisonRow(
                budget=budget, methods=(ilp_result, greedy_result), speedups=speedups
            )
        )
    return ComparisonReport(reference="ilp", rows=tuple(rows))
