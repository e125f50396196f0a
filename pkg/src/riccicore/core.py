"""Core-subgraph extraction: augment, flow, cut the heaviest edges, take the largest SCC(s)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .augmentation import AugmentationResult, augment_to_strong, strip_artificial
from .flow import FlowConfig, FlowTrace, run_flow
from .graph import (
    GraphError,
    WeightedDigraph,
    largest_weakly_connected_component,
    strongly_connected_components,
)

TIE_POLICIES = ("keep-all-maximal", "single-largest")


def _check_tie_policy(policy: str) -> None:
    if policy not in TIE_POLICIES:
        raise ValueError(f"tie policy must be one of {TIE_POLICIES}, got {policy!r}")


@dataclass(frozen=True)
class ExtractionConfig:
    """Pipeline parameters.

    ``cut_count``, when given, fixes how many of the heaviest real edges are
    cut and overrides ``tau``.
    """

    tau: float = 0.8
    tie_policy: str = "keep-all-maximal"
    artificial_weight: float | None = None
    flow: FlowConfig = field(default_factory=FlowConfig)
    cut_count: int | None = None

    def __post_init__(self):
        if not 0.0 < self.tau < 1.0:
            raise ValueError(f"tau must lie in (0, 1), got {self.tau}")
        _check_tie_policy(self.tie_policy)
        if self.artificial_weight is not None and not self.artificial_weight > 0:
            raise ValueError("artificial weight must be positive")
        if self.cut_count is not None and self.cut_count < 0:
            raise ValueError("cut_count must be nonnegative")

    def as_dict(self) -> dict:
        return {"tau": self.tau, "tie_policy": self.tie_policy,
                "artificial_weight": self.artificial_weight, "cut_count": self.cut_count,
                "flow": self.flow.as_dict()}


@dataclass(frozen=True)
class CoreResult:
    core_nodes: tuple[int, ...]
    core_edges: tuple[tuple[int, int], ...]
    retained_edges: tuple[tuple[int, int], ...] = ()
    components: tuple[tuple[int, ...], ...] = ()
    is_single_scc: bool = True
    degenerate: bool = False

    @property
    def n_nodes(self) -> int:
        return len(self.core_nodes)

    @property
    def n_edges(self) -> int:
        return len(self.core_edges)

    def to_dict(self, g: WeightedDigraph) -> dict:
        lab = g.labels
        return {
            "core_nodes": [lab[v] for v in self.core_nodes],
            "core_edges": [[lab[u], lab[v]] for u, v in self.core_edges],
            "n_core_nodes": self.n_nodes,
            "n_core_edges": self.n_edges,
            "n_components": len(self.components),
            "is_single_scc": self.is_single_scc,
            "degenerate": self.degenerate,
        }


def retention_count(m: int, tau: float) -> int:
    """``ceil((1 - tau) * m)``, with a small guard against round-off just above an integer."""
    return min(m, max(0, math.ceil((1.0 - tau) * m - 1e-9)))


def cut_heaviest_edges(g_flowed: WeightedDigraph, tau: float | None = None, *,
                       cut_count: int | None = None) -> list[tuple[int, int]]:
    """Keep the lightest edges after the flow.

    Edges are ranked by weight ascending, ties by edge order, and the first
    ``ceil((1 - tau) * m)`` are kept (or all but ``cut_count``).  Returns the
    retained edges in edge order.
    """
    if g_flowed.artificial.any():
        raise GraphError("strip artificial edges before cutting")
    m = g_flowed.m
    if cut_count is not None:
        keep = max(0, m - int(cut_count))
    elif tau is not None:
        if not 0.0 <= tau < 1.0:
            raise ValueError(f"tau must lie in [0, 1), got {tau}")
        keep = retention_count(m, tau)
    else:
        raise ValueError("give tau or cut_count")
    order = np.argsort(g_flowed.weights, kind="stable")
    kept = np.sort(order[:keep])
    edges = g_flowed.edges
    return [edges[i] for i in kept.tolist()]


def core_from_nodes(g: WeightedDigraph, nodes: Iterable[int], tie_policy: str = "keep-all-maximal",
                    retained: Iterable[tuple[int, int]] = ()) -> CoreResult:
    """Largest strongly connected component(s) of the subgraph of ``g`` induced by ``nodes``.

    If every component is a singleton the result is flagged degenerate; it
    then holds all candidate nodes (keep-all-maximal) or the smallest one.
    """
    _check_tie_policy(tie_policy)
    nodes = sorted(set(int(v) for v in nodes))
    retained = tuple(retained)
    if not nodes:
        return CoreResult((), (), retained, (), False, True)
    mask = g.induced_edge_mask(nodes)
    sub = g.edge_subgraph(mask)
    inside = set(nodes)
    comps = [c for c in strongly_connected_components(sub) if c[0] in inside]
    comps.sort(key=lambda c: c[0])
    size = max(len(c) for c in comps)
    chosen = [c for c in comps if len(c) == size]
    if tie_policy == "single-largest":
        chosen = chosen[:1]
    comp_of = {v: i for i, c in enumerate(chosen) for v in c}
    core_edges = tuple((u, v) for u, v in sub.edges
                       if u in comp_of and comp_of[u] == comp_of.get(v))
    core_nodes = tuple(sorted(comp_of))
    return CoreResult(core_nodes, core_edges, retained, tuple(tuple(c) for c in chosen),
                      len(chosen) == 1, size == 1)


def extract_core(g_original: WeightedDigraph, retained: Iterable[tuple[int, int]],
                 tie_policy: str = "keep-all-maximal") -> CoreResult:
    """Induce on the endpoints of the retained edges in the original graph and take its largest SCC(s).

    Original edges between surviving nodes reappear even if they were cut.
    """
    retained = [(int(u), int(v)) for u, v in retained]
    for e in retained:
        if not g_original.has_edge(*e):
            raise GraphError(f"retained edge {e} is not an edge of the original graph")
    survivors = {v for e in retained for v in e}
    return core_from_nodes(g_original, survivors, tie_policy, retained)


@dataclass
class PipelineResult:
    graph: WeightedDigraph
    augmentation: AugmentationResult
    trace: FlowTrace
    core: CoreResult

    @property
    def final_weights(self) -> np.ndarray:
        """Post-flow weights of the real edges, aligned with ``graph.edges``."""
        return self.trace.final_weights[~self.augmentation.graph.artificial]


def run_pipeline(g_raw: WeightedDigraph, config: ExtractionConfig) -> PipelineResult:
    """Largest weak component, augmentation, flow, strip, cut, core.

    ``result.graph`` is the largest weak component; node and edge ids in the
    core refer to it.
    """
    g = largest_weakly_connected_component(g_raw)
    aug = augment_to_strong(g, config.artificial_weight)
    trace = run_flow(aug.graph, config.flow)
    flowed = strip_artificial(aug.graph.with_weights(trace.final_weights))
    retained = cut_heaviest_edges(flowed, config.tau, cut_count=config.cut_count)
    core = extract_core(g, retained, config.tie_policy)
    return PipelineResult(g, aug, trace, core)
