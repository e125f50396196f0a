"""Directed weighted graphs: storage, ingestion, connectivity and distances.

Nodes are dense integer indices ``0..n-1`` carrying the string label they had
in the input.  Edges are stored as parallel arrays in a fixed order (input
order, then insertion order for edges added later); every downstream
tie-break refers to that order.
"""

from __future__ import annotations

import json
import logging
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from os import PathLike
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

logger = logging.getLogger(__name__)

COMMENT_PREFIXES = ("#", "%")


class GraphError(ValueError):
    """Invalid graph construction or an operation applied to an unsuitable graph."""


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, line: str, reason: str):
        self.lineno = lineno
        self.line = line
        super().__init__(f"line {lineno}: {reason}: {line!r}")


class UnknownNodeError(KeyError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WeightedDigraph:
    """Immutable directed graph with positive edge weights.

    Parameters
    ----------
    labels : sequence of str
        Label of every node; position is the node index.
    src, dst : array of int
        Endpoints of each edge.
    weights : array of float
        Strictly positive edge weights.
    artificial : array of bool, optional
        Marks edges added by strong-connectivity augmentation.
    """

    labels: tuple[str, ...]
    src: np.ndarray
    dst: np.ndarray
    weights: np.ndarray
    artificial: np.ndarray

    def __init__(self, labels: Sequence[str], src, dst, weights=None, artificial=None):
        labels = tuple(str(label) for label in labels)
        src = np.asarray(src, dtype=np.int64).reshape(-1).copy()
        dst = np.asarray(dst, dtype=np.int64).reshape(-1).copy()
        m = len(src)
        weights = (np.ones(m) if weights is None
                   else np.asarray(weights, dtype=float).reshape(-1).copy())
        artificial = (np.zeros(m, dtype=bool) if artificial is None
                      else np.asarray(artificial, dtype=bool).reshape(-1).copy())
        n = len(labels)
        if not (len(dst) == len(weights) == len(artificial) == m):
            raise GraphError("edge arrays have mismatched lengths")
        if len(set(labels)) != n:
            raise GraphError("node labels must be unique")
        if m:
            if src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n:
                raise GraphError("edge endpoint out of range")
            if np.any(src == dst):
                raise GraphError("self-loops are not allowed")
            if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
                raise GraphError("edge weights must be finite and strictly positive")
            keys = src * n + dst
            if len(np.unique(keys)) != m:
                raise GraphError("parallel edges are not allowed")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "src", _frozen(src))
        object.__setattr__(self, "dst", _frozen(dst))
        object.__setattr__(self, "weights", _frozen(weights))
        object.__setattr__(self, "artificial", _frozen(artificial))

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.src)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.src.tolist(), self.dst.tolist()))

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def label_index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def out_edges(self) -> tuple[np.ndarray, ...]:
        """Edge ids leaving each node, in edge order."""
        return self._group(self.src)

    @cached_property
    def in_edges(self) -> tuple[np.ndarray, ...]:
        return self._group(self.dst)

    def _group(self, key: np.ndarray) -> tuple[np.ndarray, ...]:
        order = np.argsort(key, kind="stable")
        bounds = np.searchsorted(key[order], np.arange(self.n + 1))
        return tuple(_frozen(order[bounds[i]:bounds[i + 1]]) for i in range(self.n))

    @cached_property
    def successors(self) -> tuple[list[int], ...]:
        return tuple(self.dst[ids].tolist() for ids in self.out_edges)

    @cached_property
    def predecessors(self) -> tuple[list[int], ...]:
        return tuple(self.src[ids].tolist() for ids in self.in_edges)

    def out_degree(self) -> np.ndarray:
        return np.bincount(self.src, minlength=self.n)

    def in_degree(self) -> np.ndarray:
        return np.bincount(self.dst, minlength=self.n)

    def node(self, key: int | str) -> int:
        """Resolve a node index or label to an index."""
        if isinstance(key, (int, np.integer)) and not isinstance(key, bool):
            if 0 <= key < self.n:
                return int(key)
            raise UnknownNodeError(key)
        try:
            return self.label_index[str(key)]
        except KeyError:
            raise UnknownNodeError(key) from None

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedDigraph):
            return NotImplemented
        return (self.labels == other.labels
                and np.array_equal(self.src, other.src)
                and np.array_equal(self.dst, other.dst)
                and np.array_equal(self.weights, other.weights)
                and np.array_equal(self.artificial, other.artificial))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        extra = int(self.artificial.sum())
        return f"WeightedDigraph(n={self.n}, m={self.m}, artificial={extra})"

    # -- derived graphs --------------------------------------------------

    def with_weights(self, weights) -> "WeightedDigraph":
        return WeightedDigraph(self.labels, self.src, self.dst, weights, self.artificial)

    def add_edges(self, pairs: Iterable[tuple[int, int]], weight: float,
                  artificial: bool = True) -> "WeightedDigraph":
        pairs = list(pairs)
        if not pairs:
            return self
        extra_src, extra_dst = zip(*pairs)
        k = len(pairs)
        return WeightedDigraph(
            self.labels,
            np.concatenate([self.src, extra_src]),
            np.concatenate([self.dst, extra_dst]),
            np.concatenate([self.weights, np.full(k, float(weight))]),
            np.concatenate([self.artificial, np.full(k, artificial)]),
        )

    def edge_subgraph(self, keep) -> "WeightedDigraph":
        """Same node set, only the edges selected by a boolean mask or id list."""
        keep = np.asarray(keep)
        if keep.dtype != bool:
            mask = np.zeros(self.m, dtype=bool)
            mask[keep.astype(np.int64)] = True
            keep = mask
        return WeightedDigraph(self.labels, self.src[keep], self.dst[keep],
                               self.weights[keep], self.artificial[keep])

    def induced_edge_mask(self, nodes: Iterable[int]) -> np.ndarray:
        inside = np.zeros(self.n, dtype=bool)
        inside[list(nodes)] = True
        return inside[self.src] & inside[self.dst]

    def induced_subgraph(self, nodes: Iterable[int]) -> "WeightedDigraph":
        """Subgraph induced on ``nodes``, re-indexed in increasing original index order."""
        nodes = sorted(set(int(v) for v in nodes))
        remap = np.full(self.n, -1, dtype=np.int64)
        remap[nodes] = np.arange(len(nodes))
        keep = self.induced_edge_mask(nodes) if nodes else np.zeros(self.m, dtype=bool)
        return WeightedDigraph([self.labels[v] for v in nodes], remap[self.src[keep]],
                               remap[self.dst[keep]], self.weights[keep],
                               self.artificial[keep])

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence], labels: Sequence[str] | None = None
                   ) -> "WeightedDigraph":
        """Build from ``(src, dst)`` or ``(src, dst, weight)`` tuples of labels.

        Nodes are indexed by first appearance unless ``labels`` fixes the order.
        """
        index: dict[str, int] = {}
        if labels is not None:
            for label in labels:
                index.setdefault(str(label), len(index))
        src, dst, w = [], [], []
        for e in edges:
            a, b = str(e[0]), str(e[1])
            for label in (a, b):
                index.setdefault(label, len(index))
            src.append(index[a])
            dst.append(index[b])
            w.append(float(e[2]) if len(e) > 2 else 1.0)
        return cls(list(index), src, dst, w)


# -- ingestion / serialisation ----------------------------------------------


@dataclass(frozen=True)
class ParsedEdgeList:
    graph: WeightedDigraph
    duplicates: int
    self_loops: int


def parse_edge_list(text: str | Iterable[str], ignore_weights: bool = False) -> ParsedEdgeList:
    """Parse whitespace-separated ``src dst [weight]`` lines.

    Lines starting with ``#`` or ``%`` are comments.  Self-loops are dropped and
    for repeated ordered pairs the first occurrence wins; both are counted.
    With ``ignore_weights`` any columns after the second are ignored.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    index: dict[str, int] = {}
    seen: set[tuple[int, int]] = set()
    src, dst, w = [], [], []
    duplicates = self_loops = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        tokens = line.split()
        if len(tokens) < 2 or (len(tokens) > 3 and not ignore_weights):
            raise EdgeListParseError(lineno, raw, "expected 'src dst [weight]'")
        weight = 1.0
        if len(tokens) == 3 and not ignore_weights:
            try:
                weight = float(tokens[2])
            except ValueError:
                raise EdgeListParseError(lineno, raw, "weight is not a number") from None
            if not math.isfinite(weight) or weight <= 0:
                raise EdgeListParseError(lineno, raw, "weight must be finite and positive")
        a, b = tokens[0], tokens[1]
        if a == b:
            self_loops += 1
            index.setdefault(a, len(index))
            continue
        for label in (a, b):
            index.setdefault(label, len(index))
        key = (index[a], index[b])
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        src.append(key[0])
        dst.append(key[1])
        w.append(weight)
    if duplicates or self_loops:
        logger.warning("edge list: dropped %d duplicate edge(s) and %d self-loop(s)",
                       duplicates, self_loops)
    return ParsedEdgeList(WeightedDigraph(list(index), src, dst, w), duplicates, self_loops)


def load_edge_list(text: str | Iterable[str], ignore_weights: bool = False) -> WeightedDigraph:
    return parse_edge_list(text, ignore_weights).graph


def to_edge_list(g: WeightedDigraph) -> str:
    for label in g.labels:
        if not label or any(c.isspace() for c in label) or label.startswith(COMMENT_PREFIXES):
            raise GraphError(f"label {label!r} cannot be written to an edge list")
    lines = [f"{g.labels[u]} {g.labels[v]} {w!r}" for (u, v), w in zip(g.edges, g.weights.tolist())]
    return "".join(line + "\n" for line in lines)


def graph_to_dict(g: WeightedDigraph) -> dict:
    return {
        "nodes": list(g.labels),
        "edges": [
            {"src": g.labels[u], "dst": g.labels[v], "weight": w, "artificial": a}
            for (u, v), w, a in zip(g.edges, g.weights.tolist(), g.artificial.tolist())
        ],
    }


def graph_from_dict(data: dict) -> WeightedDigraph:
    labels = [str(x) for x in data.get("nodes", [])]
    index = {label: i for i, label in enumerate(labels)}
    src, dst, w, art = [], [], [], []
    for e in data.get("edges", []):
        for key in (str(e["src"]), str(e["dst"])):
            if key not in index:
                index[key] = len(labels)
                labels.append(key)
        src.append(index[str(e["src"])])
        dst.append(index[str(e["dst"])])
        w.append(float(e.get("weight", 1.0)))
        art.append(bool(e.get("artificial", False)))
    return WeightedDigraph(labels, src, dst, w, art)


def read_graph(path: str | PathLike, ignore_weights: bool = False) -> WeightedDigraph:
    """Read a graph from a ``.json`` file or an edge-list text file."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        return graph_from_dict(data.get("graph", data))
    return load_edge_list(text, ignore_weights=ignore_weights)


# -- connectivity -----------------------------------------------------------


def strongly_connected_components(g: WeightedDigraph) -> list[list[int]]:
    """Tarjan's algorithm, iterative.

    Components come out in reverse topological order of the condensation
    (sink components first); each component is a sorted list of node ids.
    """
    n = g.n
    succ = g.successors
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, 0)]
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


@dataclass(frozen=True)
class Condensation:
    """DAG of strongly connected components (meta-nodes)."""

    components: list[list[int]]
    component_of: np.ndarray
    successors: list[list[int]]
    predecessors: list[list[int]]

    @property
    def sources(self) -> list[int]:
        return [c for c, p in enumerate(self.predecessors) if not p]

    @property
    def sinks(self) -> list[int]:
        return [c for c, s in enumerate(self.successors) if not s]


def condensation(g: WeightedDigraph) -> Condensation:
    comps = strongly_connected_components(g)
    comp_of = np.empty(g.n, dtype=np.int64)
    for c, members in enumerate(comps):
        comp_of[members] = c
    succ: list[set[int]] = [set() for _ in comps]
    pred: list[set[int]] = [set() for _ in comps]
    for a, b in zip(comp_of[g.src].tolist(), comp_of[g.dst].tolist()):
        if a != b:
            succ[a].add(b)
            pred[b].add(a)
    return Condensation(comps, comp_of, [sorted(s) for s in succ], [sorted(p) for p in pred])


def weakly_connected_components(g: WeightedDigraph) -> list[list[int]]:
    """Weak components as sorted node lists, ordered by their smallest node."""
    seen = np.zeros(g.n, dtype=bool)
    comps = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in g.successors[v] + g.predecessors[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def largest_weakly_connected_component(g: WeightedDigraph) -> WeightedDigraph:
    """Induced subgraph on the largest weak component (ties: smallest node index)."""
    comps = weakly_connected_components(g)
    if not comps:
        return g
    best = max(comps, key=lambda c: (len(c), -c[0]))
    if len(best) == g.n:
        return g
    return g.induced_subgraph(best)


def is_strongly_connected(g: WeightedDigraph) -> bool:
    """True when every ordered pair is joined by a directed path.  The empty graph counts as connected."""
    return len(strongly_connected_components(g)) <= 1


def is_weakly_connected(g: WeightedDigraph) -> bool:
    """The empty graph counts as connected."""
    return len(weakly_connected_components(g)) <= 1


# -- distances --------------------------------------------------------------


def _check_lengths(lengths: str) -> None:
    if lengths not in ("weighted", "hop"):
        raise ValueError(f"lengths must be 'weighted' or 'hop', got {lengths!r}")


def _adjacency(g: WeightedDigraph, lengths: str) -> csr_matrix:
    data = g.weights if lengths == "weighted" else np.ones(g.m)
    return csr_matrix((data, (g.src, g.dst)), shape=(g.n, g.n))


def all_pairs_distances(g: WeightedDigraph, lengths: str = "weighted",
                        sources: Sequence[int] | None = None) -> np.ndarray:
    """Directed shortest-path distances; ``inf`` where no path exists.

    Returns an ``(len(sources), n)`` array, or ``(n, n)`` when ``sources`` is None.
    """
    _check_lengths(lengths)
    rows = g.n if sources is None else len(sources)
    if g.n == 0 or rows == 0:
        return np.zeros((rows, g.n))
    method = "D" if lengths == "weighted" else "auto"
    return shortest_path(_adjacency(g, lengths), method=method, directed=True,
                         unweighted=(lengths == "hop"), indices=sources)


def single_source_distances(g: WeightedDigraph, u: int | str, lengths: str = "weighted") -> np.ndarray:
    u = g.node(u)
    return all_pairs_distances(g, lengths, sources=[u])[0]


def all_pairs_hop_distances(g: WeightedDigraph) -> np.ndarray:
    return all_pairs_distances(g, "hop")


def shortest_path_distance(g: WeightedDigraph, u: int | str, v: int | str,
                           lengths: str = "weighted") -> float:
    v = g.node(v)
    return float(single_source_distances(g, u, lengths)[v])


# -- summary statistics -----------------------------------------------------


@dataclass(frozen=True)
class GraphStats:
    vertices: int
    edges: int
    avg_degree: float
    diameter: int
    density: float

    def as_dict(self) -> dict:
        return {"vertices": self.vertices, "edges": self.edges, "avg_degree": self.avg_degree,
                "diameter": self.diameter, "density": self.density}


def graph_stats(g: WeightedDigraph) -> GraphStats:
    """Counts, average degree ``2m/n``, hop diameter and density ``m/(n(n-1))``.

    The diameter is the largest finite hop distance over ordered pairs and is
    taken over the largest weak component when ``g`` is not weakly connected.
    """
    n, m = g.n, g.m
    h = g if is_weakly_connected(g) else largest_weakly_connected_component(g)
    diameter = 0
    if h.n > 1:
        d = all_pairs_hop_distances(h)
        finite = d[np.isfinite(d)]
        diameter = int(finite.max()) if finite.size else 0
    return GraphStats(
        vertices=n,
        edges=m,
        avg_degree=2.0 * m / n if n else 0.0,
        diameter=diameter,
        density=m / (n * (n - 1)) if n > 1 else 0.0,
    )
