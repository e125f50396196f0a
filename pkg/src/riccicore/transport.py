"""Exact optimal transport between small discrete measures.

The primal solver is a successive-shortest-path min-cost flow on the dense
bipartite transport network (Dijkstra with node potentials).  Supports here
are an out-neighbourhood plus the node itself, so problems are small and the
exact optimum is cheap.  The Kantorovich dual is solved separately as a
linear program and serves as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Union

import numpy as np
from scipy.optimize import linprog

MASS_TOL = 1e-12
_ZERO = 1e-15
# above this many cells the numpy solver beats the pure-Python one
SMALL_PROBLEM = 2500


class TransportError(ValueError):
    pass


class NotStronglyConnectedError(TransportError):
    """Some support point of the source measure cannot reach a support point of the target."""


@dataclass(frozen=True, eq=False)
class ProbMeasure:
    """Finite probability distribution over node ids (strictly positive masses)."""

    nodes: np.ndarray
    masses: np.ndarray

    def __init__(self, nodes, masses):
        nodes = np.asarray(nodes, dtype=np.int64).reshape(-1)
        masses = np.asarray(masses, dtype=float).reshape(-1)
        if nodes.shape != masses.shape:
            raise TransportError("nodes and masses differ in length")
        if len(np.unique(nodes)) != len(nodes):
            raise TransportError("repeated support node")
        if nodes.size == 0 or np.any(masses <= 0) or not np.all(np.isfinite(masses)):
            raise TransportError("masses must be finite and strictly positive")
        if abs(masses.sum() - 1.0) > MASS_TOL:
            raise TransportError(f"masses sum to {masses.sum()!r}, not 1")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def from_dict(cls, support: Mapping[int, float]) -> "ProbMeasure":
        items = sorted((int(k), float(v)) for k, v in support.items() if v > 0)
        return cls([k for k, _ in items], [v for _, v in items])

    @classmethod
    def dirac(cls, node: int) -> "ProbMeasure":
        return cls([node], [1.0])

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.nodes.tolist(), self.masses.tolist()))

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class TransportPlan:
    """Optimal coupling; ``matrix[i, j]`` is mass moved from ``sources[i]`` to ``targets[j]``."""

    sources: np.ndarray
    targets: np.ndarray
    matrix: np.ndarray
    total_cost: float

    @property
    def entries(self) -> list[tuple[int, int, float]]:
        i, j = np.nonzero(self.matrix)
        return [(int(self.sources[a]), int(self.targets[b]), float(self.matrix[a, b]))
                for a, b in zip(i, j)]


GroundCost = Union[np.ndarray, Callable[[int, int], float]]


def cost_matrix(ground_cost: GroundCost, mu: ProbMeasure, nu: ProbMeasure) -> np.ndarray:
    """Ground costs between supports, from a full distance matrix or a callable."""
    if callable(ground_cost):
        c = np.array([[ground_cost(int(u), int(v)) for v in nu.nodes] for u in mu.nodes], dtype=float)
    else:
        c = np.asarray(ground_cost, dtype=float)[np.ix_(mu.nodes, nu.nodes)]
    if not np.all(np.isfinite(c)):
        raise NotStronglyConnectedError("infinite ground cost between support points "
                                        "(graph is not strongly connected)")
    if np.any(c < 0):
        raise TransportError("ground costs must be nonnegative")
    return c


def solve_transport(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Optimal plan for supplies ``a``, demands ``b`` and costs ``c >= 0``.

    Successive shortest augmenting paths.  Every still-active supply node keeps
    potential 0, so a multi-source Dijkstra on reduced costs finds the
    globally shortest augmenting path; the target is the active demand node
    minimising reduced distance plus its old potential.
    """
    p, q = c.shape
    if p == 1:
        return b[None, :].astype(float).copy()
    if q == 1:
        return a[:, None].astype(float).copy()
    if p * q <= SMALL_PROBLEM:
        flow = _ssp_lists(a.tolist(), b.tolist(), c.tolist())
        return np.array(flow, dtype=float)
    return _ssp_dense(a, b, c)


def _ssp_lists(a: list, b: list, c: list) -> list:
    # Same algorithm as _ssp_dense on Python lists; faster for small supports.
    p, q = len(a), len(b)
    inf = float("inf")
    flow = [[0.0] * q for _ in range(p)]
    ra, rb = list(a), list(b)
    pot_u, pot_v = [0.0] * p, [0.0] * q
    for _ in range(4 * (p + q) ** 2 + 10):
        if not any(x > _ZERO for x in ra) or not any(x > _ZERO for x in rb):
            return flow
        red = [[max(c[i][j] + pot_u[i] - pot_v[j], 0.0) for j in range(q)] for i in range(p)]
        du = [0.0 if x > _ZERO else inf for x in ra]
        dv = [inf] * q
        pred_u, pred_v = [-1] * p, [-1] * q
        done_u, done_v = [False] * p, [False] * q
        while True:
            iu, bu = -1, inf
            for i in range(p):
                if not done_u[i] and du[i] < bu:
                    iu, bu = i, du[i]
            iv, bv = -1, inf
            for j in range(q):
                if not done_v[j] and dv[j] < bv:
                    iv, bv = j, dv[j]
            if iu < 0 and iv < 0:
                break
            if iu >= 0 and bu <= bv:
                done_u[iu] = True
                row = red[iu]
                for j in range(q):
                    if not done_v[j]:
                        cand = bu + row[j]
                        if cand < dv[j]:
                            dv[j] = cand
                            pred_v[j] = iu
            else:
                done_v[iv] = True
                for i in range(p):
                    if not done_u[i] and flow[i][iv] > _ZERO:
                        cand = bv - red[i][iv]
                        if cand < du[i]:
                            du[i] = cand
                            pred_u[i] = iv
        j, best = -1, inf
        for k in range(q):
            if rb[k] > _ZERO and dv[k] + pot_v[k] < best:
                j, best = k, dv[k] + pot_v[k]
        if j < 0:
            raise TransportError("no augmenting path; supplies and demands do not balance")
        path, backs = [], []
        v = j
        while True:
            u = pred_v[v]
            path.append((u, v))
            if pred_u[u] < 0:
                break
            v = pred_u[u]
            backs.append((u, v))
        start = path[-1][0]
        delta = min(ra[start], rb[j])
        for u, v in backs:
            delta = min(delta, flow[u][v])
        for u, v in path:
            flow[u][v] += delta
        for u, v in backs:
            flow[u][v] -= delta
            if flow[u][v] < _ZERO:
                flow[u][v] = 0.0
        ra[start] -= delta
        rb[j] -= delta
        if ra[start] <= _ZERO:
            ra[start] = 0.0
        if rb[j] <= _ZERO:
            rb[j] = 0.0
        reach = max([x for x in du + dv if x < inf], default=0.0)
        for i in range(p):
            pot_u[i] += du[i] if du[i] < inf else reach
        for k in range(q):
            pot_v[k] += dv[k] if dv[k] < inf else reach
    raise TransportError("transport solver did not terminate")


def _ssp_dense(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    p, q = c.shape
    flow = np.zeros((p, q))
    ra = a.astype(float).copy()
    rb = b.astype(float).copy()
    pot_u = np.zeros(p)
    pot_v = np.zeros(q)
    inf = np.inf
    for _ in range(4 * (p + q) ** 2 + 10):
        active_u = ra > _ZERO
        active_v = rb > _ZERO
        if not active_u.any() or not active_v.any():
            return flow
        reduced = c + pot_u[:, None] - pot_v[None, :]
        np.maximum(reduced, 0.0, out=reduced)  # clamp round-off
        du = np.where(active_u, 0.0, inf)
        dv = np.full(q, inf)
        pred_u = np.full(p, -1)
        pred_v = np.full(q, -1)
        done_u = np.zeros(p, dtype=bool)
        done_v = np.zeros(q, dtype=bool)
        while True:
            cu = np.where(done_u, inf, du)
            cv = np.where(done_v, inf, dv)
            iu = int(np.argmin(cu))
            iv = int(np.argmin(cv))
            if cu[iu] == inf and cv[iv] == inf:
                break
            if cu[iu] <= cv[iv]:
                done_u[iu] = True
                cand = du[iu] + reduced[iu]
                better = (cand < dv) & ~done_v
                dv[better] = cand[better]
                pred_v[better] = iu
            else:
                done_v[iv] = True
                # backward arcs v -> u exist where flow is positive; reduced cost 0
                back = (flow[:, iv] > _ZERO) & ~done_u
                cand = dv[iv] - reduced[:, iv]
                better = back & (cand < du)
                du[better] = cand[better]
                pred_u[better] = iv
        real = np.where(active_v, dv + pot_v, inf)
        j = int(np.argmin(real))
        if real[j] == inf:
            raise TransportError("no augmenting path; supplies and demands do not balance")
        path, backs = [], []
        v = j
        while True:
            u = int(pred_v[v])
            path.append((u, v))
            if pred_u[u] < 0:
                break
            v = int(pred_u[u])
            backs.append((u, v))
        start = path[-1][0]
        delta = min([ra[start], rb[j]] + [flow[u, v] for u, v in backs])
        for u, v in path:
            flow[u, v] += delta
        for u, v in backs:
            flow[u, v] -= delta
            if flow[u, v] < _ZERO:
                flow[u, v] = 0.0
        ra[start] -= delta
        rb[j] -= delta
        if ra[start] <= _ZERO:
            ra[start] = 0.0
        if rb[j] <= _ZERO:
            rb[j] = 0.0
        reach = max(du[np.isfinite(du)].max(initial=0.0), dv[np.isfinite(dv)].max(initial=0.0))
        pot_u += np.where(np.isfinite(du), du, reach)
        pot_v += np.where(np.isfinite(dv), dv, reach)
    raise TransportError("transport solver did not terminate")


def wasserstein(ground_cost: GroundCost, mu: ProbMeasure, nu: ProbMeasure) -> TransportPlan:
    """Exact 1-Wasserstein transport from ``mu`` to ``nu``.

    Parameters
    ----------
    ground_cost : ndarray or callable
        Full ``(n, n)`` distance matrix indexed by node id, or ``f(u, v)``.
    mu, nu : ProbMeasure

    Raises
    ------
    NotStronglyConnectedError
        If some required ground cost is infinite.
    """
    c = cost_matrix(ground_cost, mu, nu)
    plan = solve_transport(mu.masses, nu.masses, c)
    return TransportPlan(mu.nodes, nu.nodes, plan, float((plan * c).sum()))


def kantorovich_dual_value(ground_cost: GroundCost, mu: ProbMeasure, nu: ProbMeasure) -> float:
    """Dual optimum ``max sum psi (mu - nu)`` over 1-Lipschitz potentials on the joint support.

    Constraints ``psi(u) - psi(v) <= d(u, v)`` are imposed for every ordered
    pair of distinct joint-support points.  Solved with the HiGHS LP solver.
    """
    nodes = np.union1d(mu.nodes, nu.nodes)
    k = len(nodes)
    joint = ProbMeasure(nodes, np.full(k, 1.0 / k))
    d = cost_matrix(ground_cost, joint, joint)
    pos = {v: i for i, v in enumerate(nodes.tolist())}
    signed = np.zeros(k)
    for v, m in zip(mu.nodes.tolist(), mu.masses):
        signed[pos[v]] += m
    for v, m in zip(nu.nodes.tolist(), nu.masses):
        signed[pos[v]] -= m
    if k == 1:
        return 0.0
    rows, rhs = [], []
    for i in range(k):
        for j in range(k):
            if i != j:
                row = np.zeros(k)
                row[i], row[j] = 1.0, -1.0
                rows.append(row)
                rhs.append(d[i, j])
    # potentials are defined up to a constant; pin the first one
    bounds = [(0.0, 0.0)] + [(None, None)] * (k - 1)
    res = linprog(-signed, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds,
                  method="highs", options={"primal_feasibility_tolerance": 1e-10,
                                           "dual_feasibility_tolerance": 1e-10})
    if res.status != 0:
        raise TransportError(f"dual LP failed: {res.message}")
    return float(-res.fun)
