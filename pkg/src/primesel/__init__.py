"""Per-layer primitive selection for DNN inference under time and memory budgets."""

from .costs import (
    evaluate,
    exec_time,
    memory_sum,
    total_time,
    transform_time,
    workspace_max,
)
from .errors import (
    CapExceededError,
    InfeasibleError,
    InvalidProfileError,
    InvalidRequestError,
    InvalidSelectionError,
    MissingFamilyError,
    MissingTransformCost,
    NotAChainError,
    PrimeselError,
    ProfileFormatError,
)
from .ilp import (
    IlpProblem,
    SolveMode,
    SolveOutcome,
    SolveRequest,
    SolveStats,
    SolveStatus,
    build_problem,
    dump_lp,
    linearized_transition_value,
    solve_bnb,
    solve_chain_labels,
)
from .model import (
    BufferBreakdown,
    DataLayout,
    Edge,
    LayerProfile,
    NetworkProfile,
    ObjectiveBreakdown,
    PrimitiveCandidate,
    Selection,
    TransformRule,
    TransitionMatrix,
    derive_transition_matrix,
    validate_profile,
)
from .pareto import FrontierPoint, auto_grid, extract_frontier, sweep_memory_budget
from .planner import ExecutionPlan, PlanStep, fits, plan_execution
from .profile_io import (
    load_profile,
    load_selection,
    parse_profile,
    parse_selection,
    save_profile,
    serialize_profile,
    serialize_selection,
)
from .strategies import (
    ComparisonReport,
    ComparisonRow,
    MethodResult,
    brute_force,
    common_families,
    compare,
    solve_greedy,
    solve_min_memory,
    solve_min_time,
    solve_min_workspace,
    solve_uniform,
)
from .synth import demo_profile, generate_profile, greedy_trap_profile

__version__ = "0.1.0"
