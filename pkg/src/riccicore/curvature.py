"""Ricci curvature of directed edges from outward lazy random walks.

For an edge ``x -> y`` the curvature is ``1 - W(mu_x, mu_y) / d(x, y)`` where
``mu_x`` keeps mass ``alpha`` at ``x`` and spreads ``1 - alpha`` over the
out-neighbours of ``x`` proportionally to edge weight, ``W`` is the exact
transport cost under the directed shortest-path metric, and ``d`` is that
same metric evaluated on the current weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import GraphError, WeightedDigraph, all_pairs_distances
from .transport import NotStronglyConnectedError, ProbMeasure, cost_matrix, solve_transport


class UndefinedMeasureError(GraphError):
    pass


@dataclass(frozen=True)
class EdgeCurvature:
    edge: tuple[int, int]
    rho: float
    wasserstein: float
    kappa: float


@dataclass(frozen=True)
class CurvatureArrays:
    """Per-edge ``rho``, ``wasserstein`` and ``kappa`` aligned with the graph's edge order."""

    rho: np.ndarray
    wasserstein: np.ndarray
    kappa: np.ndarray

    def records(self, g: WeightedDigraph) -> list[EdgeCurvature]:
        return [EdgeCurvature(e, r, w, k) for e, r, w, k in
                zip(g.edges, self.rho.tolist(), self.wasserstein.tolist(), self.kappa.tolist())]


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    return alpha


def out_measure(g: WeightedDigraph, x: int | str, alpha: float) -> ProbMeasure:
    """Outward ``alpha``-lazy one-step random walk from ``x``.

    Zero-mass points are left out of the support, so ``alpha = 0`` omits ``x``
    and ``alpha = 1`` gives the Dirac mass at ``x`` whatever its neighbours.
    """
    alpha = _check_alpha(alpha)
    x = g.node(x)
    if alpha == 1.0:
        return ProbMeasure.dirac(x)
    ids = g.out_edges[x]
    if len(ids) == 0:
        raise UndefinedMeasureError(
            f"undefined out-measure: node {g.labels[x]!r} has no outgoing edge "
            "(augment the graph to strong connectivity first)")
    w = g.weights[ids]
    masses = (1.0 - alpha) * w / w.sum()
    nodes = g.dst[ids]
    if alpha > 0.0:
        nodes = np.concatenate([[x], nodes])
        masses = np.concatenate([[alpha], masses])
    return ProbMeasure(nodes, masses)


def _resolve_edge(g: WeightedDigraph, e) -> tuple[int, int]:
    if isinstance(e, (int, np.integer)):
        return g.edges[int(e)]
    u, v = g.node(e[0]), g.node(e[1])
    if not g.has_edge(u, v):
        raise GraphError(f"({g.labels[u]!r}, {g.labels[v]!r}) is not an edge")
    return u, v


def _curvature(dist: np.ndarray, mx: ProbMeasure, my: ProbMeasure, x: int, y: int
               ) -> tuple[float, float, float]:
    rho = float(dist[x, y])
    if not np.isfinite(rho):
        raise NotStronglyConnectedError("edge endpoints are not connected")
    c = cost_matrix(dist, mx, my)
    plan = solve_transport(mx.masses, my.masses, c)
    w = float((plan * c).sum())
    return rho, w, 1.0 - w / rho


def edge_curvature(g: WeightedDigraph, e, alpha: float,
                   distances: np.ndarray | None = None) -> EdgeCurvature:
    """Curvature of one edge, given as ``(src, dst)`` (ids or labels) or an edge id.

    ``distances`` may pass a precomputed weighted all-pairs matrix for ``g``.
    """
    alpha = _check_alpha(alpha)
    x, y = _resolve_edge(g, e)
    dist = all_pairs_distances(g) if distances is None else distances
    rho, w, kappa = _curvature(dist, out_measure(g, x, alpha), out_measure(g, y, alpha), x, y)
    return EdgeCurvature((x, y), rho, w, kappa)


def curvature_arrays(g: WeightedDigraph, alpha: float,
                     distances: np.ndarray | None = None) -> CurvatureArrays:
    """Curvature of every edge; distances are computed once from the current weights."""
    alpha = _check_alpha(alpha)
    dist = all_pairs_distances(g) if distances is None else distances
    measures: dict[int, ProbMeasure] = {}

    def measure(v: int) -> ProbMeasure:
        if v not in measures:
            measures[v] = out_measure(g, v, alpha)
        return measures[v]

    m = g.m
    rho, wass, kappa = np.empty(m), np.empty(m), np.empty(m)
    for i, (x, y) in enumerate(g.edges):
        rho[i], wass[i], kappa[i] = _curvature(dist, measure(x), measure(y), x, y)
    return CurvatureArrays(rho, wass, kappa)


def all_edge_curvatures(g: WeightedDigraph, alpha: float) -> list[EdgeCurvature]:
    return curvature_arrays(g, alpha).records(g)
