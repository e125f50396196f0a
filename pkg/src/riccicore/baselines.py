"""Node-centrality baselines and their top-k core extraction.

All four measures ignore edge weights.  A baseline core takes the ``k``
highest-scoring nodes (ties by node index), induces on them and keeps the
largest strongly connected component(s), with the same tie policy as the
Ricci pipeline.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix

from .core import CoreResult, core_from_nodes
from .graph import WeightedDigraph, all_pairs_hop_distances

METHODS = ("pagerank", "degree", "betweenness", "closeness")


class PageRankConvergenceError(RuntimeError):
    def __init__(self, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(f"PageRank did not converge in {iterations} iterations "
                         f"(L1 residual {residual:.3e})")


@dataclass(frozen=True)
class CentralityScores:
    method: str
    scores: np.ndarray

    def ranking(self) -> list[int]:
        """Nodes by decreasing score, ties by node index.

        Scores are compared at 12 significant digits so that accumulation-order
        round-off does not decide ties.
        """
        key = [float(f"{s:.12g}") for s in self.scores.tolist()]
        return sorted(range(len(key)), key=lambda v: (-key[v], v))


def degree_centrality(g: WeightedDigraph) -> CentralityScores:
    return CentralityScores("degree", (g.in_degree() + g.out_degree()).astype(float))


def betweenness_centrality(g: WeightedDigraph) -> CentralityScores:
    """Brandes accumulation over unit-hop directed shortest paths, unnormalised."""
    n = g.n
    succ = g.successors
    cb = np.zeros(n)
    for s in range(n):
        order = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        dist = [-1] * n
        sigma[s], dist[s] = 1, 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in succ[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        for w in reversed(order):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                cb[w] += delta[w]
    return CentralityScores("betweenness", cb)


def closeness_centrality(g: WeightedDigraph) -> CentralityScores:
    """Outward closeness scaled by reachability.

    With ``r`` nodes reachable from ``v`` at total hop distance ``S``, the
    score is ``(r / (n - 1)) * (r / S)``, and 0 when nothing is reachable.
    """
    n = g.n
    scores = np.zeros(n)
    if n < 2:
        return CentralityScores("closeness", scores)
    d = all_pairs_hop_distances(g)
    np.fill_diagonal(d, np.inf)
    finite = np.isfinite(d)
    r = finite.sum(axis=1)
    total = np.where(finite, d, 0.0).sum(axis=1)
    ok = r > 0
    scores[ok] = (r[ok] / (n - 1)) * (r[ok] / total[ok])
    return CentralityScores("closeness", scores)


def pagerank(g: WeightedDigraph, damping: float = 0.85, tol: float = 1e-8,
             max_iter: int = 1000) -> CentralityScores:
    """Power iteration with uniform teleport; dangling mass is spread uniformly.

    Stops when the L1 change between iterates drops below ``tol``.
    """
    n = g.n
    if n == 0:
        return CentralityScores("pagerank", np.zeros(0))
    out = g.out_degree().astype(float)
    inv = np.divide(1.0, out, out=np.zeros(n), where=out > 0)
    # column-stochastic on non-dangling columns: P[v, u] = 1/outdeg(u) for u -> v
    p = csr_matrix((inv[g.src], (g.dst, g.src)), shape=(n, n))
    dangling = out == 0
    x = np.full(n, 1.0 / n)
    residual = np.inf
    for it in range(1, max_iter + 1):
        new = damping * (p @ x + x[dangling].sum() / n) + (1.0 - damping) / n
        new /= new.sum()
        residual = float(np.abs(new - x).sum())
        x = new
        if residual < tol:
            return CentralityScores("pagerank", x)
    raise PageRankConvergenceError(residual, max_iter)


_SCORERS = {
    "pagerank": pagerank,
    "degree": degree_centrality,
    "betweenness": betweenness_centrality,
    "closeness": closeness_centrality,
}


def centrality(g: WeightedDigraph, method: str) -> CentralityScores:
    try:
        return _SCORERS[method](g)
    except KeyError:
        raise ValueError(f"unknown centrality method {method!r}; choose from {METHODS}") from None


def baseline_core(g: WeightedDigraph, method: str, k: int,
                  tie_policy: str = "keep-all-maximal",
                  scores: CentralityScores | None = None) -> CoreResult:
    """Largest SCC(s) of the subgraph induced by the top-``k`` nodes under ``method``."""
    if not 1 <= k <= g.n:
        raise ValueError(f"k must lie in [1, {g.n}], got {k}")
    scores = centrality(g, method) if scores is None else scores
    top = scores.ranking()[:k]
    return core_from_nodes(g, top, tie_policy)
