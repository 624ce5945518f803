"""0-1 integer program construction and exact solvers for primitive selection.

``build_problem`` lowers a profile into explicit variables, a linear
objective and linear constraints: one binary variable per (layer,
candidate) with a one-hot equality per layer, plus one binary product
variable per nonzero transition entry linearized as ``y >= x_j + x_k - 1``,
``y >= 0`` (exact for minimization with nonnegative costs).

``solve_bnb`` proves optimality with a depth-first branch and bound over
layers in topological order; ``solve_chain_labels`` is an independent
label-correcting sweep for chain topologies used to cross-check it.
"""

from __future__ import annotations

import math
import time as _time
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence, Union

from .costs import evaluate, selection_indices
from .errors import InvalidProfileError, InvalidRequestError, NotAChainError
from .model import NetworkProfile, Selection

_INF = math.inf


class SolveMode(Enum):
    MIN_TIME = "min-time"
    MIN_MEMORY_SUM = "min-memory"
    MIN_WORKSPACE = "min-workspace"


@dataclass(frozen=True)
class SolveRequest:
    """What to optimize and under which budgets.

    ``memory_budget`` caps the whole-network footprint sum and
    ``workspace_budget`` caps every single layer's footprint; both apply
    only to MIN_TIME. ``time_budget`` caps total time and applies only to
    the two memory modes. ``time_limit`` is wall-clock seconds.
    """

    mode: SolveMode
    memory_budget: Optional[int] = None
    time_budget: Optional[int] = None
    workspace_budget: Optional[int] = None
    time_limit: Optional[float] = None

    def check(self) -> None:
        if self.mode is SolveMode.MIN_TIME:
            if self.time_budget is not None:
                raise InvalidRequestError("min-time does not accept a time budget")
        else:
            if self.memory_budget is not None:
                raise InvalidRequestError(f"{self.mode.value} does not accept a memory budget")
            if self.workspace_budget is not None:
                raise InvalidRequestError(f"{self.mode.value} does not accept a workspace budget")
        for name in ("memory_budget", "time_budget", "workspace_budget"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise InvalidRequestError(f"{name} must be nonnegative, got {value}")


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    TIMED_OUT = "timed-out"


@dataclass(frozen=True)
class SolveStats:
    nodes: int
    wall_time_s: float


@dataclass(frozen=True)
class SolveOutcome:
    """Result of one solve.

    ``proof`` is the lower bound at termination; it equals ``objective``
    when the status is OPTIMAL. A timed-out solve may still carry the best
    incumbent selection found.
    """

    status: SolveStatus
    selection: Optional[Selection]
    objective: Optional[int]
    proof: Optional[int]
    stats: SolveStats


@dataclass(frozen=True)
class PrimaryVar:
    layer_index: int
    layer_id: str
    candidate: int


@dataclass(frozen=True)
class ProductVar:
    edge_index: int
    from_layer: str
    to_layer: str
    j: int
    k: int
    cost: int


@dataclass(frozen=True)
class WorkspaceVar:
    upper: int


@dataclass(frozen=True)
class Constraint:
    name: str
    coeffs: tuple[tuple[int, int], ...]  # (variable, coefficient)
    relation: str  # "<=" or "=="
    bound: int


@dataclass(frozen=True)
class IlpProblem:
    """Explicit 0-1 program plus the profile it was built from.

    ``num_vars`` counts primaries, products and the optional workspace
    epigraph variable. Generic rows are materialized lazily; the solver
    works from the profile structure carried alongside.
    """

    profile: NetworkProfile
    request: SolveRequest
    num_vars: int
    num_primary_vars: int
    primary_vars: tuple[tuple[int, ...], ...]  # [layer][candidate] -> variable
    product_vars: Mapping[tuple[int, int, int], int]  # (edge, j, k) -> variable
    workspace_var: Optional[int]

    @cached_property
    def var_meta(self) -> tuple[object, ...]:
        meta: list[object] = []
        for i, layer in enumerate(self.profile.layers):
            for c in range(len(layer.candidates)):
                meta.append(PrimaryVar(i, layer.layer_id, c))
        transitions = self.profile.transitions
        for (e, j, k) in self.product_vars:
            edge = self.profile.edges[e]
            meta.append(
                ProductVar(e, edge.from_layer, edge.to_layer, j, k, transitions[e].cost[j][k])
            )
        if self.workspace_var is not None:
            upper = max(
                (c.memory_cost for layer in self.profile.layers for c in layer.candidates),
                default=0,
            )
            meta.append(WorkspaceVar(upper))
        return tuple(meta)

    @cached_property
    def objective(self) -> tuple[int, ...]:
        obj = [0] * self.num_vars
        mode = self.request.mode
        for i, layer in enumerate(self.profile.layers):
            for c, cand in enumerate(layer.candidates):
                if mode is SolveMode.MIN_TIME:
                    obj[self.primary_vars[i][c]] = cand.time_cost
                elif mode is SolveMode.MIN_MEMORY_SUM:
                    obj[self.primary_vars[i][c]] = cand.memory_cost
        if mode is SolveMode.MIN_TIME:
            transitions = self.profile.transitions
            for (e, j, k), var in self.product_vars.items():
                obj[var] = transitions[e].cost[j][k]
        if self.workspace_var is not None:
            obj[self.workspace_var] = 1
        return tuple(obj)

    @cached_property
    def constraints(self) -> tuple[Constraint, ...]:
        rows: list[Constraint] = []
        for i, layer_vars in enumerate(self.primary_vars):
            rows.append(
                Constraint(f"onehot_{i}", tuple((v, 1) for v in layer_vars), "==", 1)
            )
        for (e, j, k), y in self.product_vars.items():
            edge = self.profile.edges[e]
            xj = self.primary_vars[self.profile.layer_index(edge.from_layer)][j]
            xk = self.primary_vars[self.profile.layer_index(edge.to_layer)][k]
            rows.append(
                Constraint(f"link_{e}_{j}_{k}", ((xj, 1), (xk, 1), (y, -1)), "<=", 1)
            )
            rows.append(Constraint(f"nonneg_{e}_{j}_{k}", ((y, -1),), "<=", 0))

        req = self.request
        layers = self.profile.layers

        def mem_terms(i):
            return tuple(
                (self.primary_vars[i][c], cand.memory_cost)
                for c, cand in enumerate(layers[i].candidates)
            )

        if req.mode is SolveMode.MIN_TIME:
            if req.memory_budget is not None:
                terms = tuple(term for i in range(len(layers)) for term in mem_terms(i))
                rows.append(Constraint("mem_budget", terms, "<=", req.memory_budget))
            if req.workspace_budget is not None:
                for i in range(len(layers)):
                    rows.append(
                        Constraint(f"ws_cap_{i}", mem_terms(i), "<=", req.workspace_budget)
                    )
        else:
            if req.time_budget is not None:
                terms = [
                    (self.primary_vars[i][c], cand.time_cost)
                    for i, layer in enumerate(layers)
                    for c, cand in enumerate(layer.candidates)
                ]
                transitions = self.profile.transitions
                for (e, j, k), y in self.product_vars.items():
                    terms.append((y, transitions[e].cost[j][k]))
                rows.append(Constraint("time_budget", tuple(terms), "<=", req.time_budget))
            if req.mode is SolveMode.MIN_WORKSPACE:
                for i in range(len(layers)):
                    terms = mem_terms(i) + ((self.workspace_var, -1),)
                    rows.append(Constraint(f"ws_{i}", terms, "<=", 0))
        return tuple(rows)


def build_problem(profile: NetworkProfile, request: SolveRequest) -> IlpProblem:
    """Lower a validated profile into the explicit 0-1 program."""
    request.check()
    violations = profile.violations
    if violations:
        raise InvalidProfileError(
            f"profile '{profile.name}' failed validation: {violations[0]}"
            + (f" (+{len(violations) - 1} more)" if len(violations) > 1 else "")
        )
    primary: list[tuple[int, ...]] = []
    counter = 0
    for layer in profile.layers:
        ids = tuple(range(counter, counter + len(layer.candidates)))
        primary.append(ids)
        counter += len(layer.candidates)
    num_primary = counter
    products: dict[tuple[int, int, int], int] = {}
    for e, matrix in enumerate(profile.transitions):
        for j, row in enumerate(matrix.cost):
            for k, cost in enumerate(row):
                if cost != 0:
                    products[(e, j, k)] = counter
                    counter += 1
    workspace_var = None
    if request.mode is SolveMode.MIN_WORKSPACE:
        workspace_var = counter
        counter += 1
    return IlpProblem(
        profile=profile,
        request=request,
        num_vars=counter,
        num_primary_vars=num_primary,
        primary_vars=tuple(primary),
        product_vars=products,
        workspace_var=workspace_var,
    )


def linearized_transition_value(problem: IlpProblem, assignment) -> int:
    """Transition cost sum with product variables at their constrained minimum.

    For a one-hot assignment each product variable settles at 1 exactly when
    both of its endpoints are chosen; the result must equal the cost
    engine's transform_time.
    """
    profile = problem.profile
    indices = selection_indices(profile, assignment)
    transitions = profile.transitions
    total = 0
    for e, edge in enumerate(profile.edges):
        j = indices[profile.layer_index(edge.from_layer)]
        k = indices[profile.layer_index(edge.to_layer)]
        if (e, j, k) in problem.product_vars:
            total += transitions[e].cost[j][k]
    return total


def _var_names(problem: IlpProblem) -> list[str]:
    names = []
    for meta in problem.var_meta:
        if isinstance(meta, PrimaryVar):
            names.append(f"x_{meta.layer_index}_{meta.candidate}")
        elif isinstance(meta, ProductVar):
            names.append(f"y_{meta.edge_index}_{meta.j}_{meta.k}")
        else:
            names.append("w")
    return names


def _lin(terms: Iterable[tuple[int, int]], names: Sequence[str]) -> str:
    parts = []
    for var, coef in terms:
        if coef == 0:
            continue
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        term = names[var] if mag == 1 else f"{mag} {names[var]}"
        parts.append(f"{sign} {term}")
    if not parts:
        return "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def dump_lp(problem: IlpProblem) -> str:
    """The problem in LP text format, for inspection with third-party solvers."""
    names = _var_names(problem)
    lines = [f"\\ {problem.profile.name} ({problem.request.mode.value})", "Minimize"]
    obj_terms = [(v, c) for v, c in enumerate(problem.objective) if c != 0]
    if not obj_terms and names:
        obj_terms = [(0, 0)]
    lines.append(f" obj: {_lin(obj_terms, names)}")
    lines.append("Subject To")
    for row in problem.constraints:
        rel = "<=" if row.relation == "<=" else "="
        lines.append(f" {row.name}: {_lin(row.coeffs, names)} {rel} {row.bound}")
    binaries = [
        names[i]
        for i, meta in enumerate(problem.var_meta)
        if not isinstance(meta, WorkspaceVar)
    ]
    if problem.workspace_var is not None:
        upper = problem.var_meta[problem.workspace_var].upper
        lines.append("Bounds")
        lines.append(f" 0 <= w <= {upper}")
    if binaries:
        lines.append("Binaries")
        for start in range(0, len(binaries), 12):
            lines.append(" " + " ".join(binaries[start : start + 12]))
    if problem.workspace_var is not None:
        lines.append("Generals")
        lines.append(" w")
    lines.append("End")
    return "\n".join(lines) + "\n"


class _Tables:
    """Search-ready view of one problem: flat cost arrays plus admissible bounds.

    ``active`` drops candidates dominated by a lower-index candidate that is
    no worse in time, memory, and every incident transition entry; such
    candidates cannot appear in the lexicographically-first optimum.
    """

    def __init__(self, profile: NetworkProfile, request: SolveRequest):
        self.profile = profile
        self.request = request
        self.mode = request.mode
        layers = profile.layers
        self.m = m = len(layers)
        self.t = [[c.time_cost for c in layer.candidates] for layer in layers]
        self.mem = [[c.memory_cost for c in layer.candidates] for layer in layers]

        recs = []
        for e, edge in enumerate(profile.edges):
            u = profile.layer_index(edge.from_layer)
            v = profile.layer_index(edge.to_layer)
            recs.append((u, v, [list(row) for row in profile.transitions[e].cost]))
        in_full: list[list] = [[] for _ in range(m)]
        out_full: list[list] = [[] for _ in range(m)]
        for u, v, rows in recs:
            in_full[v].append((u, rows))
            out_full[u].append((v, rows))

        self.active = self._active_candidates(in_full, out_full)

        self.in_edges: list[list] = [[] for _ in range(m)]
        self.noncons_out: list[list] = [[] for _ in range(m)]
        self.cons: list = [None] * m
        ff_by_u = [0] * (m + 1)
        for u, v, rows in recs:
            cols = self.active[v]
            rowmin = [min(row[k] for k in cols) for row in rows]
            noncons = v != u + 1
            self.in_edges[v].append((u, rows, rowmin, noncons))
            if noncons:
                self.noncons_out[u].append((v, rowmin))
                ff_by_u[u] += min(rowmin[j] for j in self.active[u])
            else:
                self.cons[u] = rows
        self.ff = [0] * (m + 1)
        for p in range(m - 1, -1, -1):
            self.ff[p] = self.ff[p + 1] + ff_by_u[p]

        self.min_m_suf = [0] * (m + 1)
        self.max_minm_suf = [0] * (m + 1)
        for p in range(m - 1, -1, -1):
            low = min(self.mem[p][j] for j in self.active[p])
            self.min_m_suf[p] = self.min_m_suf[p + 1] + low
            self.max_minm_suf[p] = max(self.max_minm_suf[p + 1], low)

        # Viterbi over consecutive positions; other edges enter the bound at
        # their active-restricted minimum, so the bound stays admissible on DAGs
        # and exact on chains.
        self.w = [[0] * len(self.t[p]) for p in range(m)]
        self.wr = [[0] * len(self.t[p]) for p in range(m)]
        if m:
            for j in self.active[m - 1]:
                self.w[m - 1][j] = self.t[m - 1][j]
            for p in range(m - 2, -1, -1):
                nxt = self.active[p + 1]
                w_next = self.w[p + 1]
                rows_c = self.cons[p]
                if rows_c is None:
                    floor = min(w_next[k] for k in nxt)
                    for j in self.active[p]:
                        self.wr[p][j] = floor
                        self.w[p][j] = self.t[p][j] + floor
                else:
                    for j in self.active[p]:
                        row = rows_c[j]
                        best = min(row[k] + w_next[k] for k in nxt)
                        self.wr[p][j] = best
                        self.w[p][j] = self.t[p][j] + best

    def _active_candidates(self, in_full, out_full) -> list[list[int]]:
        wsb = self.request.workspace_budget
        active: list[list[int]] = []
        for i in range(self.m):
            allowed = [
                j
                for j in range(len(self.t[i]))
                if wsb is None or self.mem[i][j] <= wsb
            ]
            keep = []
            for j in allowed:
                dominated = False
                for jp in allowed:
                    if jp >= j:
                        break
                    if self.t[i][jp] > self.t[i][j] or self.mem[i][jp] > self.mem[i][j]:
                        continue
                    ok = True
                    for u, rows in in_full[i]:
                        for q in active[u]:
                            if rows[q][jp] > rows[q][j]:
                                ok = False
                                break
                        if not ok:
                            break
                    if ok:
                        for _, rows in out_full[i]:
                            for a, b in zip(rows[jp], rows[j]):
                                if a > b:
                                    ok = False
                                    break
                            if not ok:
                                break
                    if ok:
                        dominated = True
                        break
                if not dominated:
                    keep.append(j)
            active.append(keep)
        return active

    def assignment_value(self, xs: Sequence[int]):
        """(feasible, objective) of a complete assignment, computed exactly."""
        req = self.request
        total_t = sum(self.t[p][xs[p]] for p in range(self.m))
        for v in range(self.m):
            for u, rows, _, _ in self.in_edges[v]:
                total_t += rows[xs[u]][xs[v]]
        msum = sum(self.mem[p][xs[p]] for p in range(self.m))
        wsmax = max((self.mem[p][xs[p]] for p in range(self.m)), default=0)
        if req.memory_budget is not None and msum > req.memory_budget:
            return False, None
        if req.workspace_budget is not None and wsmax > req.workspace_budget:
            return False, None
        if req.time_budget is not None and total_t > req.time_budget:
            return False, None
        if self.mode is SolveMode.MIN_TIME:
            return True, total_t
        if self.mode is SolveMode.MIN_MEMORY_SUM:
            return True, msum
        return True, wsmax

    def heuristic_assignments(self) -> list[list[int]]:
        if self.m == 0:
            return []
        paths = []
        vit = []
        j = min(self.active[0], key=lambda a: self.w[0][a])
        vit.append(j)
        for p in range(self.m - 1):
            nxt = self.active[p + 1]
            rows_c = self.cons[p]
            if rows_c is None:
                k = min(nxt, key=lambda a: self.w[p + 1][a])
            else:
                row = rows_c[vit[-1]]
                k = min(nxt, key=lambda a: row[a] + self.w[p + 1][a])
            vit.append(k)
        paths.append(vit)
        paths.append([min(acts, key=lambda a: self.mem[p][a]) for p, acts in enumerate(self.active)])
        paths.append([min(acts, key=lambda a: self.t[p][a]) for p, acts in enumerate(self.active)])
        return paths

    def root_bound(self):
        if self.m == 0:
            return 0
        if self.mode is SolveMode.MIN_TIME:
            return min(self.w[0][j] for j in self.active[0]) + self.ff[0]
        if self.mode is SolveMode.MIN_MEMORY_SUM:
            return self.min_m_suf[0]
        return self.max_minm_suf[0]


def _empty_outcome(profile: NetworkProfile, request: SolveRequest, wall: float) -> SolveOutcome:
    selection = Selection({}, evaluate(profile, {}))
    return SolveOutcome(SolveStatus.OPTIMAL, selection, 0, 0, SolveStats(0, wall))


def _selection_for(profile: NetworkProfile, xs: Sequence[int]) -> Selection:
    assignment = {layer.layer_id: j for layer, j in zip(profile.layers, xs)}
    return Selection(assignment, evaluate(profile, assignment))


def solve_bnb(
    problem: IlpProblem,
    time_limit: Optional[float] = None,
    *,
    seeds: Iterable[Union[Selection, Mapping[str, int]]] = (),
) -> SolveOutcome:
    """Exact depth-first branch and bound over layers in topological order.

    Children are explored in candidate-index order and the incumbent is
    replaced only on strict improvement, so among equal-valued optima the
    lexicographically lowest (layer index, candidate index) selection is
    returned. ``seeds`` are optional warm-start selections whose values
    tighten pruning without changing that tie-break: a subtree is pruned
    when its bound strictly exceeds the best seed value or reaches the
    incumbent value.
    """
    req = problem.request
    profile = problem.profile
    limit = time_limit if time_limit is not None else req.time_limit
    t0 = _time.monotonic()
    tables = _Tables(profile, req)
    m = tables.m
    if m == 0:
        return _empty_outcome(profile, req, _time.monotonic() - t0)
    if any(not acts for acts in tables.active):
        return SolveOutcome(
            SolveStatus.INFEASIBLE, None, None, None, SolveStats(0, _time.monotonic() - t0)
        )

    seed_val = _INF
    seed_xs = None
    candidates = tables.heuristic_assignments()
    for sel in seeds:
        candidates.append(selection_indices(profile, sel))
    for xs in candidates:
        feasible, value = tables.assignment_value(xs)
        if feasible and value < seed_val:
            seed_val = value
            seed_xs = list(xs)

    mode = tables.mode
    t = tables.t
    mem = tables.mem
    active = tables.active
    in_edges = tables.in_edges
    noncons_out = tables.noncons_out
    wr = tables.wr
    ff = tables.ff
    min_m_suf = tables.min_m_suf
    max_minm_suf = tables.max_minm_suf
    membud = req.memory_budget
    timebud = req.time_budget
    is_min_time = mode is SolveMode.MIN_TIME
    is_min_mem = mode is SolveMode.MIN_MEMORY_SUM

    xs = [0] * m
    exact = 0
    crossing = 0
    mem_so = 0
    ws_so = 0
    best_val: Optional[int] = None
    best_xs: Optional[list[int]] = None
    cap = seed_val
    nodes = 0
    checked = 0
    last = m - 1

    # frame: [depth, next candidate position, undo exact, undo crossing,
    #         undo workspace max, subtree bound]
    stack: list[list] = [[0, 0, 0, 0, 0, tables.root_bound()]]
    timed_out = False

    while stack:
        frame = stack[-1]
        p = frame[0]
        pos = frame[1]
        acts = active[p]
        n_act = len(acts)
        descended = False
        while pos < n_act:
            j = acts[pos]
            pos += 1
            checked += 1
            if limit is not None and (checked & 255) == 0 and _time.monotonic() - t0 > limit:
                frame[1] = pos
                timed_out = True
                break

            in_cost = 0
            rm_in = 0
            for u, rows, rowmin, noncons in in_edges[p]:
                xu = xs[u]
                in_cost += rows[xu][j]
                if noncons:
                    rm_in += rowmin[xu]
            out_rm = 0
            for _, rowmin in noncons_out[p]:
                out_rm += rowmin[j]
            exact_child = exact + t[p][j] + in_cost
            cross_child = crossing - rm_in + out_rm
            lb_time = exact_child + cross_child + wr[p][j] + ff[p + 1]

            if is_min_time:
                if membud is not None and mem_so + mem[p][j] + min_m_suf[p + 1] > membud:
                    continue
                obj_lb = lb_time
            elif is_min_mem:
                if timebud is not None and lb_time > timebud:
                    continue
                obj_lb = mem_so + mem[p][j] + min_m_suf[p + 1]
            else:
                if timebud is not None and lb_time > timebud:
                    continue
                obj_lb = ws_so
                if mem[p][j] > obj_lb:
                    obj_lb = mem[p][j]
                if max_minm_suf[p + 1] > obj_lb:
                    obj_lb = max_minm_suf[p + 1]
            if obj_lb > cap:
                continue

            nodes += 1
            if p == last:
                if best_val is None or obj_lb < best_val:
                    best_val = obj_lb
                    xs[p] = j
                    best_xs = xs.copy()
                    cap = min(cap, best_val - 1)
                continue
            xs[p] = j
            stack.append([p + 1, 0, exact, crossing, ws_so, obj_lb])
            exact = exact_child
            crossing = cross_child
            mem_so += mem[p][j]
            if mem[p][j] > ws_so:
                ws_so = mem[p][j]
            frame[1] = pos
            descended = True
            break
        if timed_out:
            break
        if descended:
            continue
        frame[1] = pos
        stack.pop()
        if p > 0:
            exact = frame[2]
            crossing = frame[3]
            ws_so = frame[4]
            mem_so -= mem[p - 1][xs[p - 1]]

    wall = _time.monotonic() - t0
    if timed_out:
        bounds = [frame[5] for frame in stack]
        incumbent = best_xs if best_xs is not None else seed_xs
        value = best_val if best_xs is not None else (None if seed_xs is None else seed_val)
        if value is not None:
            bounds.append(value)
        proof = min(bounds) if bounds else None
        selection = _selection_for(profile, incumbent) if incumbent is not None else None
        return SolveOutcome(SolveStatus.TIMED_OUT, selection, value, proof, SolveStats(nodes, wall))
    if best_xs is None:
        return SolveOutcome(SolveStatus.INFEASIBLE, None, None, None, SolveStats(nodes, wall))
    return SolveOutcome(
        SolveStatus.OPTIMAL,
        _selection_for(profile, best_xs),
        best_val,
        best_val,
        SolveStats(nodes, wall),
    )


def solve_chain_labels(profile: NetworkProfile, request: SolveRequest) -> SolveOutcome:
    """Label-correcting sweep for chains; same optimum as solve_bnb.

    A label carries (accumulated time, accumulated memory) or, in workspace
    mode, (accumulated time, running max footprint). At each (layer,
    candidate) cell a label is kept only if no other label is at least as
    good in both components; budget-violating labels are discarded eagerly
    using suffix minima.
    """
    request.check()
    if profile.violations:
        raise InvalidProfileError(f"profile '{profile.name}' failed validation")
    if not profile.is_chain:
        raise NotAChainError(f"profile '{profile.name}' has forks or joins")
    t0 = _time.monotonic()
    m = len(profile.layers)
    if m == 0:
        return _empty_outcome(profile, request, _time.monotonic() - t0)

    mode = request.mode
    t = [[c.time_cost for c in layer.candidates] for layer in profile.layers]
    mem = [[c.memory_cost for c in layer.candidates] for layer in profile.layers]
    cons: dict[int, tuple] = {}
    for e, edge in enumerate(profile.edges):
        cons[profile.layer_index(edge.from_layer)] = profile.transitions[e].cost

    rem_mem = [0] * (m + 1)
    rem_time = [0] * (m + 1)
    for p in range(m - 1, -1, -1):
        rem_mem[p] = rem_mem[p + 1] + min(mem[p])
        edge_floor = 0
        if p < m - 1:
            edge_floor = min(min(row) for row in cons[p])
        rem_time[p] = rem_time[p + 1] + (min(t[p + 1]) if p < m - 1 else 0) + edge_floor

    membud = request.memory_budget
    timebud = request.time_budget
    wsbud = request.workspace_budget
    use_max = mode is SolveMode.MIN_WORKSPACE
    created = 0

    def viable(p: int, time_acc: int, mem_acc: int) -> bool:
        if membud is not None and mem_acc + rem_mem[p + 1] > membud:
            return False
        if timebud is not None and time_acc + rem_time[p] > timebud:
            return False
        return True

    # label: (time_acc, aux, candidate, parent_label)
    cells: list[list] = [[] for _ in t[0]]
    for j in range(len(t[0])):
        if wsbud is not None and mem[0][j] > wsbud:
            continue
        aux = mem[0][j]
        if viable(0, t[0][j], mem[0][j]):
            cells[j].append((t[0][j], aux, j, None))
            created += 1

    for p in range(1, m):
        nxt: list[list] = [[] for _ in t[p]]
        matrix = cons[p - 1]
        for j, labels in enumerate(cells):
            for label in labels:
                time_acc, aux, _, _ = label
                row = matrix[j]
                for k in range(len(t[p])):
                    if wsbud is not None and mem[p][k] > wsbud:
                        continue
                    new_time = time_acc + row[k] + t[p][k]
                    if use_max:
                        new_aux = aux if aux >= mem[p][k] else mem[p][k]
                        new_mem = 0
                    else:
                        new_aux = aux + mem[p][k]
                        new_mem = new_aux
                    if not viable(p, new_time, new_mem):
                        continue
                    bucket = nxt[k]
                    dominated = False
                    for ex_time, ex_aux, _, _ in bucket:
                        if ex_time <= new_time and ex_aux <= new_aux:
                            dominated = True
                            break
                    if dominated:
                        continue
                    bucket[:] = [
                        lab for lab in bucket if not (new_time <= lab[0] and new_aux <= lab[1])
                    ]
                    bucket.append((new_time, new_aux, k, label))
                    created += 1
        cells = nxt

    best = None
    for labels in cells:
        for label in labels:
            value = label[0] if mode is SolveMode.MIN_TIME else label[1]
            if best is None or value < best[0]:
                best = (value, label)
    wall = _time.monotonic() - t0
    if best is None:
        return SolveOutcome(SolveStatus.INFEASIBLE, None, None, None, SolveStats(created, wall))
    value, label = best
    xs = [0] * m
    p = m - 1
    while label is not None:
        xs[p] = label[2]
        label = label[3]
        p -= 1
    return SolveOutcome(
        SolveStatus.OPTIMAL, _selection_for(profile, xs), value, value, SolveStats(created, wall)
    )
