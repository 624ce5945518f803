"""Domain model: networks, candidate primitives, layouts, transition costs, selections.

All values are immutable after construction and safe to share across
concurrent solver workers. Durations are integer microseconds, memory is
integer bytes; exact integer arithmetic keeps solver results deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .errors import MissingTransformCost

U64_MAX = 2**64 - 1


def _check_count(value: int, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{what} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{what} must be nonnegative, got {value}")
    if value > U64_MAX:
        raise ValueError(f"{what} exceeds the 64-bit range: {value}")
    return value


@dataclass(frozen=True)
class DataLayout:
    """Memory ordering of a tensor's dimensions, e.g. CHW or HWC.

    Layouts compare by name equality.
    """

    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("layout name must be non-empty")

    def __str__(self) -> str:
        return self.name


CHW = DataLayout("CHW")
HWC = DataLayout("HWC")


@dataclass(frozen=True)
class BufferBreakdown:
    """Per-candidate split of the memory footprint into buffer roles."""

    input: int
    output: int
    weights: int
    scratch: int

    def __post_init__(self):
        for name in ("input", "output", "weights", "scratch"):
            _check_count(getattr(self, name), f"buffer {name} size")

    @property
    def total(self) -> int:
        return self.input + self.output + self.weights + self.scratch


@dataclass(frozen=True)
class PrimitiveCandidate:
    """One implementation choice for a layer.

    ``time_cost`` is the profiled execution time in microseconds,
    ``memory_cost`` the total per-layer footprint in bytes (input, output,
    weights and scratch combined). Layout tags drive transition costs
    between adjacent layers.
    """

    id: str
    time_cost: int
    memory_cost: int
    input_layout: DataLayout
    output_layout: DataLayout
    buffer_breakdown: Optional[BufferBreakdown] = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("candidate id must be non-empty")
        _check_count(self.time_cost, f"candidate '{self.id}' time_cost")
        _check_count(self.memory_cost, f"candidate '{self.id}' memory_cost")


@dataclass(frozen=True)
class LayerProfile:
    """A layer and its ordered candidate list.

    Candidate order is stable and defines the index space used by
    selections, transition matrices, and solver variables.
    """

    layer_id: str
    candidates: tuple[PrimitiveCandidate, ...]

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))

    def __len__(self) -> int:
        return len(self.candidates)


@dataclass(frozen=True)
class TransitionMatrix:
    """Layout-transformation costs between the candidate sets of two layers.

    ``cost[j][k]`` is the time to convert the output of candidate ``j`` of
    the from-layer into the input layout of candidate ``k`` of the to-layer.
    """

    from_layer: str
    to_layer: str
    cost: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.cost)
        object.__setattr__(self, "cost", rows)
        widths = {len(row) for row in rows}
        if len(widths) > 1:
            raise ValueError(
                f"transition matrix {self.from_layer}->{self.to_layer} has ragged rows"
            )
        for row in rows:
            for entry in row:
                _check_count(entry, f"transition cost {self.from_layer}->{self.to_layer}")

    @property
    def n_from(self) -> int:
        return len(self.cost)

    @property
    def n_to(self) -> int:
        return len(self.cost[0]) if self.cost else 0


@dataclass(frozen=True)
class TransformRule:
    """One layout-pair transform cost; ``layer_id=None`` applies to any layer.

    The layer key names the producing layer: the tensor being converted is
    that layer's output. Layer-specific rules take precedence over wildcards.
    """

    from_layout: DataLayout
    to_layout: DataLayout
    cost_us: int
    layer_id: Optional[str] = None

    def __post_init__(self):
        _check_count(self.cost_us, "transform cost")


@dataclass(frozen=True)
class Edge:
    """A directed edge between two layers, optionally with an explicit matrix.

    Explicit matrices override derivation from the transform table.
    """

    from_layer: str
    to_layer: str
    matrix: Optional[TransitionMatrix] = None


@dataclass(frozen=True)
class ObjectiveBreakdown:
    """Evaluated objectives of one selection."""

    exec_time_us: int
    transform_time_us: int
    total_time_us: int
    memory_sum_bytes: int
    workspace_max_bytes: int

    def __post_init__(self):
        if self.total_time_us != self.exec_time_us + self.transform_time_us:
            raise ValueError("total_time_us must equal exec_time_us + transform_time_us")

    def as_dict(self) -> dict:
        return {
            "exec_time_us": self.exec_time_us,
            "transform_time_us": self.transform_time_us,
            "total_time_us": self.total_time_us,
            "memory_sum_bytes": self.memory_sum_bytes,
            "workspace_max_bytes": self.workspace_max_bytes,
        }


@dataclass(frozen=True)
class Selection:
    """One-hot assignment of a candidate index to every layer."""

    assignment: Mapping[str, int]
    breakdown: Optional[ObjectiveBreakdown] = None

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))

    def index_for(self, layer_id: str) -> int:
        return self.assignment[layer_id]


@dataclass(frozen=True)
class NetworkProfile:
    """A layered network: layers in topological order plus transition edges.

    Edges must point forward in layer order; a pure chain has exactly one
    edge (i, i+1) between each pair of consecutive layers. Transition
    matrices missing from edges are derived from ``layout_transforms``.
    """

    name: str
    layers: tuple[LayerProfile, ...]
    edges: tuple[Edge, ...] = ()
    layout_transforms: tuple[TransformRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "layout_transforms", tuple(self.layout_transforms))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {layer.layer_id: i for i, layer in enumerate(self.layers)}

    def layer_index(self, layer_id: str) -> int:
        return self._index[layer_id]

    def layer(self, layer_id: str) -> LayerProfile:
        return self.layers[self._index[layer_id]]

    @cached_property
    def is_chain(self) -> bool:
        if len(self.edges) != max(len(self.layers) - 1, 0):
            return False
        wanted = {
            (self.layers[i].layer_id, self.layers[i + 1].layer_id)
            for i in range(len(self.layers) - 1)
        }
        return {(e.from_layer, e.to_layer) for e in self.edges} == wanted

    @cached_property
    def transform_lookup(self) -> dict[tuple[str, str, Optional[str]], int]:
        table: dict[tuple[str, str, Optional[str]], int] = {}
        for rule in self.layout_transforms:
            key = (rule.from_layout.name, rule.to_layout.name, rule.layer_id)
            table.setdefault(key, rule.cost_us)
        return table

    @cached_property
    def transitions(self) -> tuple[TransitionMatrix, ...]:
        """Transition matrix per edge: explicit if present, else derived."""
        resolved = []
        for edge in self.edges:
            if edge.matrix is not None:
                resolved.append(edge.matrix)
            else:
                resolved.append(
                    _derive(
                        self.layers[self._index[edge.from_layer]],
                        self.layers[self._index[edge.to_layer]],
                        self.transform_lookup,
                    )
                )
        return tuple(resolved)

    @cached_property
    def violations(self) -> tuple[str, ...]:
        return tuple(validate_profile(self))


def _lookup(
    table: dict[tuple[str, str, Optional[str]], int],
    from_layout: DataLayout,
    to_layout: DataLayout,
    layer_id: str,
) -> int:
    hit = table.get((from_layout.name, to_layout.name, layer_id))
    if hit is None:
        hit = table.get((from_layout.name, to_layout.name, None))
    if hit is None:
        raise MissingTransformCost(from_layout.name, to_layout.name, layer_id)
    return hit


def _derive(
    from_layer: LayerProfile,
    to_layer: LayerProfile,
    table: dict[tuple[str, str, Optional[str]], int],
) -> TransitionMatrix:
    rows = []
    for cand_from in from_layer.candidates:
        row = []
        for cand_to in to_layer.candidates:
            if cand_from.output_layout == cand_to.input_layout:
                row.append(0)
            else:
                row.append(
                    _lookup(
                        table,
                        cand_from.output_layout,
                        cand_to.input_layout,
                        from_layer.layer_id,
                    )
                )
        rows.append(tuple(row))
    return TransitionMatrix(from_layer.layer_id, to_layer.layer_id, tuple(rows))


def derive_transition_matrix(
    from_layer: LayerProfile,
    to_layer: LayerProfile,
    table: Iterable[TransformRule],
) -> TransitionMatrix:
    """Build the transition matrix for an edge from a layout transform table.

    Entry [j][k] is zero when candidate j's output layout equals candidate
    k's input layout, else the table cost for that layout pair (keyed by the
    producing layer, falling back to a wildcard rule).

    Raises MissingTransformCost if an unequal layout pair has no rule.
    """
    lookup: dict[tuple[str, str, Optional[str]], int] = {}
    for rule in table:
        key = (rule.from_layout.name, rule.to_layout.name, rule.layer_id)
        lookup.setdefault(key, rule.cost_us)
    return _derive(from_layer, to_layer, lookup)


def validate_profile(profile: NetworkProfile) -> list[str]:
    """Check all cross-object profile invariants.

    Returns an empty list iff the profile is consistent; each violation
    names the layer or edge and the rule broken. Violations are data, not
    failures.
    """
    problems: list[str] = []
    seen_layers: dict[str, int] = {}
    for i, layer in enumerate(profile.layers):
        lid = layer.layer_id
        if lid in seen_layers:
            problems.append(f"layer '{lid}': duplicated layer id")
            continue
        seen_layers[lid] = i
        if not layer.candidates:
            problems.append(f"layer '{lid}': has no candidates")
        seen_cands = set()
        for cand in layer.candidates:
            if cand.id in seen_cands:
                problems.append(f"layer '{lid}': duplicate candidate id '{cand.id}'")
            seen_cands.add(cand.id)
            bb = cand.buffer_breakdown
            if bb is not None and bb.total != cand.memory_cost:
                problems.append(
                    f"layer '{lid}' candidate '{cand.id}': buffer breakdown sums to "
                    f"{bb.total}, expected memory_cost {cand.memory_cost}"
                )

    seen_rules = set()
    for rule in profile.layout_transforms:
        key = (rule.from_layout.name, rule.to_layout.name, rule.layer_id)
        if key in seen_rules:
            problems.append(
                f"layout transform rule ({key[0]}->{key[1]}, layer={key[2]}): duplicate rule"
            )
        seen_rules.add(key)

    seen_edges = set()
    for edge in profile.edges:
        tag = f"edge '{edge.from_layer}'->'{edge.to_layer}'"
        missing = False
        for lid in (edge.from_layer, edge.to_layer):
            if lid not in seen_layers:
                problems.append(f"{tag}: unknown layer '{lid}'")
                missing = True
        if missing:
            continue
        if (edge.from_layer, edge.to_layer) in seen_edges:
            problems.append(f"{tag}: duplicate edge")
        seen_edges.add((edge.from_layer, edge.to_layer))
        u = seen_layers[edge.from_layer]
        v = seen_layers[edge.to_layer]
        if u >= v:
            problems.append(f"{tag}: from-layer must precede to-layer in topological order")
            continue
        n_from = len(profile.layers[u].candidates)
        n_to = len(profile.layers[v].candidates)
        if edge.matrix is not None:
            mat = edge.matrix
            if mat.n_from != n_from or mat.n_to != n_to:
                problems.append(
                    f"{tag}: matrix is {mat.n_from}x{mat.n_to}, expected "
                    f"{n_from}x{n_to} (dimension mismatch)"
                )
                continue
            for j, cand_from in enumerate(profile.layers[u].candidates):
                for k, cand_to in enumerate(profile.layers[v].candidates):
                    if (
                        cand_from.output_layout == cand_to.input_layout
                        and mat.cost[j][k] != 0
                    ):
                        problems.append(
                            f"{tag} entry [{j}][{k}]: identity transform must cost 0 "
                            f"(got {mat.cost[j][k]})"
                        )
        else:
            try:
                _derive(profile.layers[u], profile.layers[v], profile.transform_lookup)
            except MissingTransformCost as exc:
                problems.append(
                    f"{tag}: no transform cost for layout pair "
                    f"{exc.from_layout}->{exc.to_layout} (cannot derive matrix)"
                )

    return problems
