"""Objective evaluation for concrete selections, independent of any solver.

Accumulation is exact integer arithmetic checked against the 64-bit
unsigned range; an overflow raises instead of wrapping.
"""

from __future__ import annotations

from typing import Mapping, Union

from .errors import InvalidSelectionError
from .model import U64_MAX, NetworkProfile, ObjectiveBreakdown, Selection

SelectionLike = Union[Selection, Mapping[str, int]]


def _checked(value: int, what: str) -> int:
    if value > U64_MAX:
        raise OverflowError(f"{what} exceeds the 64-bit accumulator range")
    return value


def selection_indices(profile: NetworkProfile, selection: SelectionLike) -> list[int]:
    """Chosen candidate index per layer, in layer order.

    Raises InvalidSelectionError unless the selection assigns exactly one
    in-range candidate to every layer of the profile.
    """
    assignment = selection.assignment if isinstance(selection, Selection) else selection
    ids = [layer.layer_id for layer in profile.layers]
    extra = set(assignment) - set(ids)
    if extra:
        raise InvalidSelectionError(f"selection names unknown layers: {sorted(extra)}")
    indices = []
    for layer in profile.layers:
        if layer.layer_id not in assignment:
            raise InvalidSelectionError(f"selection misses layer '{layer.layer_id}'")
        idx = assignment[layer.layer_id]
        if not isinstance(idx, int) or isinstance(idx, bool) or not 0 <= idx < len(layer.candidates):
            raise InvalidSelectionError(
                f"layer '{layer.layer_id}': candidate index {idx!r} out of range "
                f"0..{len(layer.candidates) - 1}"
            )
        indices.append(idx)
    return indices


def exec_time(profile: NetworkProfile, selection: SelectionLike) -> int:
    """Sum of the chosen candidates' execution times, in microseconds."""
    indices = selection_indices(profile, selection)
    total = sum(layer.candidates[i].time_cost for layer, i in zip(profile.layers, indices))
    return _checked(total, "execution time")


def transform_time(profile: NetworkProfile, selection: SelectionLike) -> int:
    """Sum over all edges of the chosen pair's layout transformation cost."""
    indices = selection_indices(profile, selection)
    total = 0
    for edge, matrix in zip(profile.edges, profile.transitions):
        j = indices[profile.layer_index(edge.from_layer)]
        k = indices[profile.layer_index(edge.to_layer)]
        total += matrix.cost[j][k]
    return _checked(total, "transform time")


def total_time(profile: NetworkProfile, selection: SelectionLike) -> int:
    """exec_time + transform_time, exactly."""
    total = exec_time(profile, selection) + transform_time(profile, selection)
    return _checked(total, "total time")


def memory_sum(profile: NetworkProfile, selection: SelectionLike) -> int:
    """Total footprint with every layer resident at once, in bytes."""
    indices = selection_indices(profile, selection)
    total = sum(layer.candidates[i].memory_cost for layer, i in zip(profile.layers, indices))
    return _checked(total, "memory sum")


def workspace_max(profile: NetworkProfile, selection: SelectionLike) -> int:
    """Largest single-layer footprint, i.e. the reusable workspace size."""
    indices = selection_indices(profile, selection)
    return max(
        (layer.candidates[i].memory_cost for layer, i in zip(profile.layers, indices)),
        default=0,
    )


def evaluate(profile: NetworkProfile, selection: SelectionLike) -> ObjectiveBreakdown:
    """All objectives of one selection, as an ObjectiveBreakdown."""
    exec_us = exec_time(profile, selection)
    trans_us = transform_time(profile, selection)
    return ObjectiveBreakdown(
        exec_time_us=exec_us,
        transform_time_us=trans_us,
        total_time_us=_checked(exec_us + trans_us, "total time"),
        memory_sum_bytes=memory_sum(profile, selection),
        workspace_max_bytes=workspace_max(profile, selection),
    )
