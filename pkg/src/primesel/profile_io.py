"""Strict JSON readers and writers for profiles and selections.

All documents carry a ``"schema": 1`` field. Unknown fields are rejected so
typos in hand-written profiles fail loudly instead of being ignored.
Serialization is deterministic: equal values produce byte-identical text.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional, Union

from .errors import ProfileFormatError
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
)

SCHEMA_VERSION = 1

PathLike = Union[str, Path]


def _check_keys(obj: dict, required: set[str], optional: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise ProfileFormatError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - required - optional
    if unknown:
        raise ProfileFormatError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ProfileFormatError(f"{where}: missing field(s) {sorted(missing)}")


def _as_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ProfileFormatError(f"{where}: expected an integer, got {value!r}")
    if value < 0:
        raise ProfileFormatError(f"{where}: must be nonnegative, got {value}")
    return value


def _as_str(value, where: str) -> str:
    if not isinstance(value, str) or not value:
        raise ProfileFormatError(f"{where}: expected a non-empty string, got {value!r}")
    return value


def _as_list(value, where: str) -> list:
    if not isinstance(value, list):
        raise ProfileFormatError(f"{where}: expected a list, got {type(value).__name__}")
    return value


def _check_schema(obj: dict, where: str) -> None:
    if "schema" in obj and obj["schema"] != SCHEMA_VERSION:
        raise ProfileFormatError(f"{where}: unsupported schema {obj['schema']!r}")


def _parse_candidate(obj, where: str) -> PrimitiveCandidate:
    _check_keys(
        obj,
        {"id", "time_us", "memory_bytes", "input_layout", "output_layout"},
        {"buffer_breakdown"},
        where,
    )
    breakdown = None
    if "buffer_breakdown" in obj:
        bb = obj["buffer_breakdown"]
        bwhere = f"{where}.buffer_breakdown"
        _check_keys(bb, {"input", "output", "weights", "scratch"}, set(), bwhere)
        breakdown = BufferBreakdown(
            input=_as_int(bb["input"], f"{bwhere}.input"),
            output=_as_int(bb["output"], f"{bwhere}.output"),
            weights=_as_int(bb["weights"], f"{bwhere}.weights"),
            scratch=_as_int(bb["scratch"], f"{bwhere}.scratch"),
        )
    return PrimitiveCandidate(
        id=_as_str(obj["id"], f"{where}.id"),
        time_cost=_as_int(obj["time_us"], f"{where}.time_us"),
        memory_cost=_as_int(obj["memory_bytes"], f"{where}.memory_bytes"),
        input_layout=DataLayout(_as_str(obj["input_layout"], f"{where}.input_layout")),
        output_layout=DataLayout(_as_str(obj["output_layout"], f"{where}.output_layout")),
        buffer_breakdown=breakdown,
    )


def _parse_matrix(rows, where: str) -> tuple[tuple[int, ...], ...]:
    out = []
    for j, row in enumerate(_as_list(rows, where)):
        out.append(
            tuple(_as_int(v, f"{where}[{j}][{k}]") for k, v in enumerate(_as_list(row, f"{where}[{j}]")))
        )
    return tuple(out)


def parse_profile(text: str) -> NetworkProfile:
    """Parse a profile document; raises ProfileFormatError on any mismatch."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileFormatError(f"not valid JSON: {exc}") from exc
    _check_keys(doc, {"name", "layers", "edges"}, {"schema", "layout_transforms"}, "profile")
    _check_schema(doc, "profile")

    layers = []
    for i, lobj in enumerate(_as_list(doc["layers"], "profile.layers")):
        where = f"profile.layers[{i}]"
        _check_keys(lobj, {"layer_id", "candidates"}, set(), where)
        lid = _as_str(lobj["layer_id"], f"{where}.layer_id")
        cands = tuple(
            _parse_candidate(c, f"{where}.candidates[{j}]")
            for j, c in enumerate(_as_list(lobj["candidates"], f"{where}.candidates"))
        )
        layers.append(LayerProfile(layer_id=lid, candidates=cands))

    edges = []
    for i, eobj in enumerate(_as_list(doc["edges"], "profile.edges")):
        where = f"profile.edges[{i}]"
        _check_keys(eobj, {"from", "to"}, {"matrix"}, where)
        src = _as_str(eobj["from"], f"{where}.from")
        dst = _as_str(eobj["to"], f"{where}.to")
        matrix = None
        if "matrix" in eobj:
            try:
                matrix = TransitionMatrix(src, dst, _parse_matrix(eobj["matrix"], f"{where}.matrix"))
            except ValueError as exc:
                raise ProfileFormatError(f"{where}.matrix: {exc}") from exc
        edges.append(Edge(from_layer=src, to_layer=dst, matrix=matrix))

    rules = []
    for i, robj in enumerate(_as_list(doc.get("layout_transforms", []), "profile.layout_transforms")):
        where = f"profile.layout_transforms[{i}]"
        _check_keys(robj, {"from_layout", "to_layout", "cost_us"}, {"layer"}, where)
        layer_id = None
        if "layer" in robj and robj["layer"] is not None:
            layer_id = _as_str(robj["layer"], f"{where}.layer")
        rules.append(
            TransformRule(
                from_layout=DataLayout(_as_str(robj["from_layout"], f"{where}.from_layout")),
                to_layout=DataLayout(_as_str(robj["to_layout"], f"{where}.to_layout")),
                cost_us=_as_int(robj["cost_us"], f"{where}.cost_us"),
                layer_id=layer_id,
            )
        )

    return NetworkProfile(
        name=_as_str(doc["name"], "profile.name"),
        layers=tuple(layers),
        edges=tuple(edges),
        layout_transforms=tuple(rules),
    )


def load_profile(path: PathLike) -> NetworkProfile:
    return parse_profile(Path(path).read_text(encoding="utf-8"))


def _candidate_doc(cand: PrimitiveCandidate) -> dict:
    doc = {
        "id": cand.id,
        "time_us": cand.time_cost,
        "memory_bytes": cand.memory_cost,
        "input_layout": cand.input_layout.name,
        "output_layout": cand.output_layout.name,
    }
    if cand.buffer_breakdown is not None:
        bb = cand.buffer_breakdown
        doc["buffer_breakdown"] = {
            "input": bb.input,
            "output": bb.output,
            "weights": bb.weights,
            "scratch": bb.scratch,
        }
    return doc


def serialize_profile(profile: NetworkProfile) -> str:
    doc: dict = {
        "schema": SCHEMA_VERSION,
        "name": profile.name,
        "layers": [
            {
                "layer_id": layer.layer_id,
                "candidates": [_candidate_doc(c) for c in layer.candidates],
            }
            for layer in profile.layers
        ],
        "edges": [],
    }
    for edge in profile.edges:
        eobj: dict = {"from": edge.from_layer, "to": edge.to_layer}
        if edge.matrix is not None:
            eobj["matrix"] = [list(row) for row in edge.matrix.cost]
        doc["edges"].append(eobj)
    if profile.layout_transforms:
        doc["layout_transforms"] = []
        for rule in profile.layout_transforms:
            robj = {
                "from_layout": rule.from_layout.name,
                "to_layout": rule.to_layout.name,
                "cost_us": rule.cost_us,
            }
            if rule.layer_id is not None:
                robj["layer"] = rule.layer_id
            doc["layout_transforms"].append(robj)
    return json.dumps(doc, indent=2) + "\n"


def save_profile(profile: NetworkProfile, path: PathLike) -> None:
    Path(path).write_text(serialize_profile(profile), encoding="utf-8")


def _parse_breakdown(obj, where: str) -> ObjectiveBreakdown:
    keys = {
        "exec_time_us",
        "transform_time_us",
        "total_time_us",
        "memory_sum_bytes",
        "workspace_max_bytes",
    }
    _check_keys(obj, keys, set(), where)
    try:
        return ObjectiveBreakdown(**{k: _as_int(obj[k], f"{where}.{k}") for k in keys})
    except ValueError as exc:
        raise ProfileFormatError(f"{where}: {exc}") from exc


def serialize_selection(
    selection: Optional[Selection],
    *,
    network: str,
    mode: str,
    status: str,
    proof: Optional[int] = None,
) -> str:
    doc = {
        "schema": SCHEMA_VERSION,
        "network": network,
        "mode": mode,
        "status": status,
        "proof": proof,
        "assignment": dict(selection.assignment) if selection is not None else None,
        "breakdown": (
            selection.breakdown.as_dict()
            if selection is not None and selection.breakdown is not None
            else None
        ),
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_selection(text: str) -> dict:
    """Parse a selection document into a dict with a ``selection`` entry.

    The returned dict has keys ``network``, ``mode``, ``status``, ``proof``
    and ``selection`` (a Selection, or None for infeasible outcomes).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileFormatError(f"not valid JSON: {exc}") from exc
    _check_keys(
        doc,
        {"network", "mode", "status", "assignment"},
        {"schema", "proof", "breakdown"},
        "selection",
    )
    _check_schema(doc, "selection")
    selection = None
    if doc["assignment"] is not None:
        assignment = doc["assignment"]
        if not isinstance(assignment, dict):
            raise ProfileFormatError("selection.assignment: expected an object or null")
        parsed = {
            _as_str(k, "selection.assignment key"): _as_int(v, f"selection.assignment[{k}]")
            for k, v in assignment.items()
        }
        breakdown = None
        if doc.get("breakdown") is not None:
            breakdown = _parse_breakdown(doc["breakdown"], "selection.breakdown")
        selection = Selection(assignment=parsed, breakdown=breakdown)
    proof = doc.get("proof")
    if proof is not None:
        proof = _as_int(proof, "selection.proof")
    return {
        "network": _as_str(doc["network"], "selection.network"),
        "mode": _as_str(doc["mode"], "selection.mode"),
        "status": _as_str(doc["status"], "selection.status"),
        "proof": proof,
        "selection": selection,
    }


def load_selection(path: PathLike) -> dict:
    return parse_selection(Path(path).read_text(encoding="utf-8"))
