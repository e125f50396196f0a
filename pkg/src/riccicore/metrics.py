"""Evaluation metrics for a core subgraph G' = (V', E') of G.

* in/out degree cohesion: mean over core nodes of deg_G'(x) / deg_G(x);
* distance stretch: mean hop-distance ratio dist_G*(u, v) / dist_G(u, v) over
  pairs of the residual graph G* = G[V \\ V'] that stay connected in G*.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .core import CoreResult
from .graph import GraphError, WeightedDigraph, all_pairs_hop_distances

PAIR_MODES = ("ordered", "unordered")


@dataclass(frozen=True)
class MetricsReport:
    r_d_in: float
    r_d_out: float
    r_s: float | None
    xi: int
    skipped_zero_degree_terms: int = 0
    pair_mode: str = "ordered"

    def as_dict(self) -> dict:
        return asdict(self)

    def as_tuple(self) -> tuple[float, float, float | None]:
        return self.r_d_in, self.r_d_out, self.r_s


def _core_parts(core) -> tuple[list[int], list[tuple[int, int]]]:
    if isinstance(core, CoreResult):
        return list(core.core_nodes), list(core.core_edges)
    nodes, edges = core
    return sorted(set(nodes)), list(edges)


def degree_cohesion(g: WeightedDigraph, core, exact: bool = False) -> tuple:
    """``(r_d_in, r_d_out, skipped)``.

    ``core`` is a :class:`CoreResult` or a ``(nodes, edges)`` pair.  Terms
    whose denominator ``deg_G(x)`` is zero are left out of the mean and counted
    in ``skipped``.  With ``exact`` the two ratios are returned as Fractions.
    """
    nodes, edges = _core_parts(core)
    if not nodes:
        raise GraphError("metrics are undefined for an empty core")
    for u, v in edges:
        if not g.has_edge(u, v):
            raise GraphError(f"core edge {(u, v)} is not an edge of the graph")
    deg_in, deg_out = g.in_degree(), g.out_degree()
    core_in = np.zeros(g.n, dtype=np.int64)
    core_out = np.zeros(g.n, dtype=np.int64)
    for u, v in edges:
        core_out[u] += 1
        core_in[v] += 1
    idx = np.asarray(nodes)
    skipped = 0
    result = []
    for num, den in ((core_in[idx], deg_in[idx]), (core_out[idx], deg_out[idx])):
        ok = den > 0
        skipped += int((~ok).sum())
        if not ok.any():
            result.append(float("nan"))
        elif exact:
            terms = [Fraction(int(a), int(b)) for a, b in zip(num[ok], den[ok])]
            result.append(sum(terms, Fraction(0)) / len(terms))
        else:
            result.append(float(np.mean(num[ok] / den[ok])))
    return result[0], result[1], skipped


def distance_stretch(g: WeightedDigraph, core, pair_mode: str = "ordered",
                     base_distances: np.ndarray | None = None) -> tuple[float | None, int]:
    """``(r_s, xi)``; ``r_s`` is None when no residual pair is connected.

    ``ordered`` averages over ordered pairs ``(u, v)`` with a finite residual
    distance.  ``unordered`` counts each pair ``{u, v}`` once, connected when
    either direction is finite, and uses the mean ratio over its finite
    directions.  ``base_distances`` may supply the hop matrix of ``g``.
    """
    if pair_mode not in PAIR_MODES:
        raise ValueError(f"pair_mode must be one of {PAIR_MODES}")
    nodes, _ = _core_parts(core)
    keep = np.ones(g.n, dtype=bool)
    keep[nodes] = False
    rest = np.flatnonzero(keep)
    if len(rest) < 2:
        return None, 0
    residual = all_pairs_hop_distances(g.induced_subgraph(rest))
    full = all_pairs_hop_distances(g) if base_distances is None else base_distances
    full = full[np.ix_(rest, rest)]
    off_diag = ~np.eye(len(rest), dtype=bool)
    finite = np.isfinite(residual) & off_diag
    ratio = np.divide(residual, full, out=np.full_like(residual, np.nan), where=finite)
    if pair_mode == "ordered":
        xi = int(finite.sum())
        return (float(ratio[finite].mean()) if xi else None), xi
    upper = np.triu(off_diag)
    either = (finite | finite.T) & upper
    xi = int(either.sum())
    if not xi:
        return None, 0
    both = np.where(finite, ratio, 0.0)
    count = finite.astype(float) + finite.T
    pair_mean = (both + both.T)[either] / count[either]
    return float(pair_mean.mean()), xi


def evaluate_core(g: WeightedDigraph, core, pair_mode: str = "ordered",
                  base_distances: np.ndarray | None = None) -> MetricsReport:
    r_in, r_out, skipped = degree_cohesion(g, core)
    r_s, xi = distance_stretch(g, core, pair_mode, base_distances)
    return MetricsReport(r_in, r_out, r_s, xi, skipped, pair_mode)
