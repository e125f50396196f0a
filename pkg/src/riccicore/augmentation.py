"""Strong-connectivity augmentation of weakly connected digraphs.

Adds the minimum number of edges, ``max(#sources, #sinks)`` of the
condensation, following Eswaran and Tarjan (1976).  Every added edge leaves
the representative (smallest node) of a sink component and enters the
representative of a source component, and carries the artificial flag and a
large weight ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import (
    Condensation,
    GraphError,
    WeightedDigraph,
    condensation,
    is_weakly_connected,
)

DEFAULT_WEIGHT_FACTOR = 100.0


@dataclass(frozen=True)
class AugmentationResult:
    graph: WeightedDigraph
    added_edges: list[tuple[int, int]]
    artificial_weight: float


def default_artificial_weight(g: WeightedDigraph) -> float:
    """``100 * max(1, largest edge weight)``."""
    top = float(g.weights.max()) if g.m else 1.0
    return DEFAULT_WEIGHT_FACTOR * max(1.0, top)


def _match_sources_to_sinks(cond: Condensation, sources: list[int],
                            sinks: set[int]) -> list[tuple[int, int]]:
    """Greedy maximal source->sink pairing through unmarked meta-nodes.

    Each search marks every meta-node it visits, so later searches cannot
    reuse them.  Afterwards every source reaches some paired sink and every
    sink is reached from some paired source.
    """
    marked = [False] * len(cond.components)
    pairs = []
    for v in sources:
        if marked[v]:
            continue
        found = None
        stack = [iter([v])]
        while stack and found is None:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                continue
            if marked[nxt]:
                continue
            marked[nxt] = True
            if nxt in sinks:
                found = nxt
                break
            stack.append(iter(cond.successors[nxt]))
        if found is not None:
            pairs.append((v, found))
    return pairs


def augmentation_edges(g: WeightedDigraph) -> list[tuple[int, int]]:
    """Node pairs to add so that a weakly connected ``g`` becomes strongly connected."""
    cond = condensation(g)
    if len(cond.components) <= 1:
        return []
    rep = [comp[0] for comp in cond.components]
    by_rep = lambda c: rep[c]  # noqa: E731
    sources = sorted(cond.sources, key=by_rep)
    sinks = sorted(cond.sinks, key=by_rep)

    pairs = _match_sources_to_sinks(cond, sources, set(sinks))
    p = len(pairs)
    matched_src = {v for v, _ in pairs}
    matched_snk = {w for _, w in pairs}
    v_order = [v for v, _ in pairs] + [v for v in sources if v not in matched_src]
    w_order = [w for _, w in pairs] + [w for w in sinks if w not in matched_snk]
    s, t = len(v_order), len(w_order)

    meta: list[tuple[int, int]] = []
    # Chain the matched pairs into one cycle: w_i -> v_{i+1}, w_p -> v_1.
    for i in range(p):
        meta.append((w_order[i], v_order[(i + 1) % p]))
    # Unmatched sources and sinks are paired off directly.
    for i in range(p, min(s, t)):
        meta.append((w_order[i], v_order[i]))
    # Surplus sinks feed the cycle; surplus sources are fed from it.
    for j in range(min(s, t), t):
        meta.append((w_order[j], v_order[0]))
    for j in range(min(s, t), s):
        meta.append((w_order[0], v_order[j]))
    return [(rep[a], rep[b]) for a, b in meta]


def augment_to_strong(g: WeightedDigraph, artificial_weight: float | None = None) -> AugmentationResult:
    """Make a weakly connected graph strongly connected with artificial edges.

    Parameters
    ----------
    g : WeightedDigraph
        Weakly connected input.  Take its largest weak component first otherwise.
    artificial_weight : float, optional
        Weight ``A`` of each added edge; defaults to
        :func:`default_artificial_weight`.

    Raises
    ------
    GraphError
        If ``g`` is not weakly connected or ``A`` is not positive.
    """
    if not is_weakly_connected(g):
        raise GraphError("graph is not weakly connected; take the largest weak component first")
    a = default_artificial_weight(g) if artificial_weight is None else float(artificial_weight)
    if not a > 0:
        raise GraphError("artificial weight must be positive")
    added = augmentation_edges(g)
    return AugmentationResult(g.add_edges(added, a, artificial=True), added, a)


def strip_artificial(g: WeightedDigraph) -> WeightedDigraph:
    if not g.artificial.any():
        return g
    return g.edge_subgraph(~g.artificial)
