"""Layer-by-layer execution planning inside a fixed reusable workspace.

Two buffers A and B alternate roles along the chain: the output buffer of
one step becomes the input buffer of the next. Buffer assignment is
logical (roles, not addresses); weights are staged per step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .costs import selection_indices
from .errors import NotAChainError
from .model import BufferBreakdown, NetworkProfile, Selection

from .profile_io import SCHEMA_VERSION


@dataclass(frozen=True)
class PlanStep:
    layer_id: str
    candidate: int
    input_buffer: str
    output_buffer: str
    weights_bytes: int
    step_bytes: int


@dataclass(frozen=True)
class ExecutionPlan:
    steps: tuple[PlanStep, ...]
    peak_workspace: int


def _breakdown_of(candidate) -> BufferBreakdown:
    if candidate.buffer_breakdown is not None:
        return candidate.buffer_breakdown
    # Coarse profiles carry only a total; treat it as scratch.
    return BufferBreakdown(input=0, output=0, weights=0, scratch=candidate.memory_cost)


def plan_execution(profile: NetworkProfile, selection: Selection) -> ExecutionPlan:
    """Assign alternating buffers along a chain and compute the peak footprint.

    Raises NotAChainError on profiles with forks or joins.
    """
    if not profile.is_chain:
        raise NotAChainError(f"profile '{profile.name}' has forks or joins")
    indices = selection_indices(profile, selection)
    steps = []
    peak = 0
    for i, (layer, idx) in enumerate(zip(profile.layers, indices)):
        cand = layer.candidates[idx]
        parts = _breakdown_of(cand)
        step_bytes = parts.total
        if step_bytes > peak:
            peak = step_bytes
        steps.append(
            PlanStep(
                layer_id=layer.layer_id,
                candidate=idx,
                input_buffer="A" if i % 2 == 0 else "B",
                output_buffer="B" if i % 2 == 0 else "A",
                weights_bytes=parts.weights,
                step_bytes=step_bytes,
            )
        )
    return ExecutionPlan(steps=tuple(steps), peak_workspace=peak)


def fits(profile: NetworkProfile, selection: Selection, workspace_bytes: int) -> bool:
    """True iff the selection's execution plan fits the given workspace."""
    return plan_execution(profile, selection).peak_workspace <= workspace_bytes


def plan_to_json(plan: ExecutionPlan, network: str) -> str:
    doc = {
        "schema": SCHEMA_VERSION,
        "network": network,
        "peak_workspace_bytes": plan.peak_workspace,
        "steps": [
            {
                "layer": step.layer_id,
                "candidate": step.candidate,
                "input_buffer": step.input_buffer,
                "output_buffer": step.output_buffer,
                "weights_bytes": step.weights_bytes,
                "step_bytes": step.step_bytes,
            }
            for step in plan.steps
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
