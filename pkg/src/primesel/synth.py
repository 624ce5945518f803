"""Seeded synthetic profiles standing in for on-device measurements.

Candidate costs are anti-correlated on purpose: fast candidates tend to be
memory hungry (matrix-lowering style) while lean candidates run slow
(direct loop nests), so budget constraints actually bite.
"""

from __future__ import annotations

import random

from .model import (
    DataLayout,
    Edge,
    LayerProfile,
    NetworkProfile,
    PrimitiveCandidate,
    TransformRule,
)

LAYOUTS = (DataLayout("CHW"), DataLayout("HWC"))

FAMILIES = ("direct", "im2col", "im2row", "kern2row", "mec", "winograd", "fft")

# (time factor, memory factor, preferred layout) per family; factors scale a
# common per-layer size unit.
_FAMILY_TRAITS = {
    "direct": (5.5, 0.12, "CHW"),
    "im2col": (1.0, 5.5, "CHW"),
    "im2row": (0.92, 6.0, "HWC"),
    "kern2row": (1.7, 1.6, "CHW"),
    "mec": (1.3, 2.4, "HWC"),
    "winograd": (0.85, 4.2, "CHW"),
    "fft": (1.6, 5.0, "HWC"),
}

_TIME_UNIT_US = 120
_MEM_UNIT_BYTES = 48_000
_TRANS_UNIT_US = 14


def _chain_edges(num_layers: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(num_layers - 1)]


def _fork_join_edges(num_layers: int, rng: random.Random) -> list[tuple[int, int]]:
    # Chain of occasional diamonds: i forks to i+1 and i+2, both join at i+3.
    edges = []
    i = 0
    while i < num_layers - 1:
        if i + 3 <= num_layers - 1 and rng.random() < 0.35:
            edges += [(i, i + 1), (i, i + 2), (i + 1, i + 3), (i + 2, i + 3)]
            i += 3
        else:
            edges.append((i, i + 1))
            i += 1
    return edges


def _layout_for(rng: random.Random, preferred: str) -> DataLayout:
    if rng.random() < 0.2:
        preferred = "HWC" if preferred == "CHW" else "CHW"
    return DataLayout(preferred)


def generate_profile(
    layers: int,
    candidates: int,
    seed: int,
    topology: str = "chain",
    name: str | None = None,
) -> NetworkProfile:
    """Deterministic synthetic profile with the given shape.

    ``topology`` is ``"chain"`` or ``"fork-join"``. Candidate ids follow the
    ``family:variant`` convention, and every family present appears in every
    layer, so uniform baselines are always constructible.
    """
    if layers < 1 or candidates < 1:
        raise ValueError("need at least one layer and one candidate")
    if topology not in ("chain", "fork-join"):
        raise ValueError(f"unknown topology {topology!r}")
    rng = random.Random(seed)
    if name is None:
        name = f"synth-{topology}-{layers}x{candidates}-s{seed}"

    num_families = min(len(FAMILIES), candidates)
    layer_profiles = []
    rules = []
    for i in range(layers):
        lid = f"conv{i + 1}"
        scale = rng.uniform(0.5, 4.0)
        cands = []
        for c in range(candidates):
            family = FAMILIES[c % num_families]
            t_factor, m_factor, preferred = _FAMILY_TRAITS[family]
            time_us = max(1, round(_TIME_UNIT_US * scale * t_factor * rng.uniform(0.8, 1.25)))
            mem_bytes = max(1, round(_MEM_UNIT_BYTES * scale * m_factor * rng.uniform(0.8, 1.25)))
            cands.append(
                PrimitiveCandidate(
                    id=f"{family}:{c // num_families}",
                    time_cost=time_us,
                    memory_cost=mem_bytes,
                    input_layout=_layout_for(rng, preferred),
                    output_layout=_layout_for(rng, preferred),
                )
            )
        layer_profiles.append(LayerProfile(layer_id=lid, candidates=tuple(cands)))
        for src in LAYOUTS:
            for dst in LAYOUTS:
                if src != dst:
                    rules.append(
                        TransformRule(
                            from_layout=src,
                            to_layout=dst,
                            cost_us=max(1, round(_TRANS_UNIT_US * scale * rng.uniform(0.5, 1.5))),
                            layer_id=lid,
                        )
                    )

    if topology == "chain":
        index_edges = _chain_edges(layers)
    else:
        index_edges = _fork_join_edges(layers, rng)
    edges = tuple(
        Edge(from_layer=layer_profiles[u].layer_id, to_layer=layer_profiles[v].layer_id)
        for u, v in index_edges
    )
    return NetworkProfile(
        name=name,
        layers=tuple(layer_profiles),
        edges=edges,
        layout_transforms=tuple(rules),
    )


# Hand-written demo: eight conv layers, five candidate styles per layer,
# spanning a wide footprint range so budget sweeps expose a visible knee.
_DEMO_SCALES = (8, 6, 6, 4, 4, 3, 2, 2)

# (id, time per size unit in us, memory per size unit in KiB, input, output)
_DEMO_CANDIDATES = (
    ("im2col", 100, 900, "CHW", "CHW"),
    ("im2row", 95, 950, "HWC", "HWC"),
    ("winograd", 118, 520, "CHW", "CHW"),
    ("mec", 105, 380, "HWC", "HWC"),
    ("direct", 420, 96, "CHW", "CHW"),
)


def demo_profile() -> NetworkProfile:
    """The profile shipped at profiles/demo.json, built deterministically."""
    layers = []
    rules = []
    for i, scale in enumerate(_DEMO_SCALES):
        lid = f"conv{i + 1}"
        cands = tuple(
            PrimitiveCandidate(
                id=cid,
                time_cost=t_unit * scale,
                memory_cost=m_kib * scale * 1024,
                input_layout=DataLayout(in_l),
                output_layout=DataLayout(out_l),
            )
            for cid, t_unit, m_kib, in_l, out_l in _DEMO_CANDIDATES
        )
        layers.append(LayerProfile(layer_id=lid, candidates=cands))
        for src, dst in (("CHW", "HWC"), ("HWC", "CHW")):
            rules.append(
                TransformRule(
                    from_layout=DataLayout(src),
                    to_layout=DataLayout(dst),
                    cost_us=3 * scale,
                    layer_id=lid,
                )
            )
    edges = tuple(
        Edge(from_layer=layers[i].layer_id, to_layer=layers[i + 1].layer_id)
        for i in range(len(layers) - 1)
    )
    return NetworkProfile(
        name="demo-tradeoff",
        layers=tuple(layers),
        edges=edges,
        layout_transforms=tuple(rules),
    )


def greedy_trap_profile() -> NetworkProfile:
    """Three-layer chain where the greedy heuristic is provably suboptimal.

    With a budget of 150 bytes the greedy swap sequence lands on a selection
    one microsecond slower than the optimum (46us vs 45us).
    """
    chw = DataLayout("CHW")

    def cand(cid, t, m):
        return PrimitiveCandidate(
            id=cid, time_cost=t, memory_cost=m, input_layout=chw, output_layout=chw
        )

    layers = (
        LayerProfile("conv1", (cand("im2col", 10, 100), cand("mec", 11, 60))),
        LayerProfile("conv2", (cand("im2col", 10, 90), cand("direct", 30, 40))),
        LayerProfile("conv3", (cand("direct", 5, 10),)),
    )
    edges = (Edge("conv1", "conv2"), Edge("conv2", "conv3"))
    return NetworkProfile(name="greedy-trap", layers=layers, edges=edges)
