"""Experiment drivers: alpha sweep, method comparison, robustness under core-edge deletion.

Independent runs (per alpha, per method, per trial) are pure functions of
their inputs, so they can go to a process pool; results are collected in
input order and every random draw is seeded from ``(seed, method, ratio,
trial)`` so output never depends on scheduling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial
from typing import Callable, Iterable, Sequence

import numpy as np

from .baselines import METHODS, baseline_core, centrality
from .core import CoreResult, ExtractionConfig, run_pipeline
from .graph import WeightedDigraph, all_pairs_hop_distances, largest_weakly_connected_component
from .metrics import MetricsReport, degree_cohesion, distance_stretch, evaluate_core

DEFAULT_ALPHAS = tuple(round(0.1 * i, 1) for i in range(10))
DEFAULT_RATIOS = tuple(round(0.1 * i, 1) for i in range(1, 10))
ROBUSTNESS_MODES = ("fixed-core", "rerun")
ALL_METHODS = ("ricci",) + METHODS


@dataclass(frozen=True)
class ExperimentConfig:
    extraction: ExtractionConfig = field(default_factory=ExtractionConfig)
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    methods: tuple[str, ...] = METHODS
    deletion_ratios: tuple[float, ...] = DEFAULT_RATIOS
    seed: int = 0
    trials: int = 10
    pair_mode: str = "ordered"
    robustness_mode: str = "fixed-core"
    threads: int = 1

    def __post_init__(self):
        if any(not 0.0 <= a < 1.0 for a in self.alphas):
            raise ValueError("alpha grid must lie in [0, 1)")
        if any(not 0.0 <= r <= 1.0 for r in self.deletion_ratios):
            raise ValueError("deletion ratios must lie in [0, 1]")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown baseline method(s): {sorted(unknown)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.robustness_mode not in ROBUSTNESS_MODES:
            raise ValueError(f"robustness mode must be one of {ROBUSTNESS_MODES}")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["extraction"] = self.extraction.as_dict()
        return d


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


# -- alpha sweep ------------------------------------------------------------


@dataclass(frozen=True)
class AlphaRow:
    alpha: float
    core_nodes: int
    core_edges: int
    r_d_in: float
    r_d_out: float
    r_s: float | None


def _alpha_run(alpha: float, g: WeightedDigraph, config: ExperimentConfig) -> AlphaRow:
    ext = config.extraction
    ext = replace(ext, flow=replace(ext.flow, alpha=alpha))
    res = run_pipeline(g, ext)
    rep = evaluate_core(res.graph, res.core, config.pair_mode)
    return AlphaRow(alpha, res.core.n_nodes, res.core.n_edges, rep.r_d_in, rep.r_d_out, rep.r_s)


def alpha_sweep(g: WeightedDigraph, config: ExperimentConfig) -> list[AlphaRow]:
    """One pipeline run per alpha with the other parameters fixed."""
    return _map(partial(_alpha_run, g=g, config=config), list(config.alphas), config.threads)


# -- method comparison ------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    method: str
    core_nodes: int
    core_edges: int
    r_d_in: float
    r_d_out: float
    r_s: float | None


@dataclass
class Comparison:
    graph: WeightedDigraph
    k: int
    rows: list[ComparisonRow]
    cores: dict[str, CoreResult]
    reports: dict[str, MetricsReport]


def _baseline_run(method: str, g: WeightedDigraph, k: int, tie_policy: str) -> CoreResult:
    return baseline_core(g, method, k, tie_policy)


def compare_methods(g: WeightedDigraph, config: ExperimentConfig) -> Comparison:
    """Ricci pipeline first; every baseline then selects ``k`` = Ricci core size nodes.

    All cores are scored by the same metric code on the same (largest weak
    component) graph.
    """
    res = run_pipeline(g, config.extraction)
    h = res.graph
    k = res.core.n_nodes
    cores = {"ricci": res.core}
    if k >= 1:
        fn = partial(_baseline_run, g=h, k=k, tie_policy=config.extraction.tie_policy)
        for method, core in zip(config.methods, _map(fn, list(config.methods), config.threads)):
            cores[method] = core
    base = all_pairs_hop_distances(h)
    reports = {name: evaluate_core(h, core, config.pair_mode, base) for name, core in cores.items()}
    rows = [ComparisonRow(name, cores[name].n_nodes, cores[name].n_edges, rep.r_d_in,
                          rep.r_d_out, rep.r_s) for name, rep in reports.items()]
    return Comparison(h, k, rows, cores, reports)


# -- robustness -------------------------------------------------------------


@dataclass(frozen=True)
class RobustnessRow:
    method: str
    ratio: float
    deleted_edges: int
    trials: int
    r_d_in: float
    r_d_out: float
    r_s: float | None


def deletion_count(n_edges: int, ratio: float) -> int:
    return int(math.floor(ratio * n_edges + 1e-9))


def _rng(seed: int, method: str, ratio_index: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, ALL_METHODS.index(method), ratio_index, trial])


def _mean(values: Iterable[float | None]) -> float | None:
    vals = [v for v in values if v is not None]
    return float(np.mean(vals)) if vals else None


def _rerun_core(method: str, damaged: WeightedDigraph, k: int, config: ExperimentConfig
                ) -> tuple[WeightedDigraph, CoreResult]:
    if method == "ricci":
        res = run_pipeline(damaged, config.extraction)
        return res.graph, res.core
    h = largest_weakly_connected_component(damaged)
    return h, baseline_core(h, method, min(k, h.n), config.extraction.tie_policy)


def _robustness_cell(job: tuple, g: WeightedDigraph, cores: dict[str, CoreResult], k: int,
                     config: ExperimentConfig) -> RobustnessRow:
    method, ri, ratio = job
    core = cores[method]
    edges = list(core.core_edges)
    n_del = deletion_count(len(edges), ratio)
    r_in, r_out, r_s = [], [], []
    fixed_rs = None
    if config.robustness_mode == "fixed-core":
        fixed_rs = distance_stretch(g, core, config.pair_mode)[0]
    for t in range(config.trials):
        drop = set(_rng(config.seed, method, ri, t).choice(len(edges), n_del, replace=False).tolist())
        kept = [e for i, e in enumerate(edges) if i not in drop]
        if config.robustness_mode == "fixed-core":
            a, b, _ = degree_cohesion(g, (core.core_nodes, kept))
            r_in.append(a)
            r_out.append(b)
            r_s.append(fixed_rs)
            continue
        removed = {edges[i] for i in drop}
        mask = np.array([e not in removed for e in g.edges], dtype=bool)
        h, new_core = _rerun_core(method, g.edge_subgraph(mask), k, config)
        if new_core.n_nodes == 0:
            r_in.append(0.0)
            r_out.append(0.0)
            r_s.append(None)
            continue
        rep = evaluate_core(h, new_core, config.pair_mode)
        r_in.append(rep.r_d_in)
        r_out.append(rep.r_d_out)
        r_s.append(rep.r_s)
    return RobustnessRow(method, ratio, n_del, config.trials, float(np.mean(r_in)),
                         float(np.mean(r_out)), _mean(r_s))


def robustness_deletion(g: WeightedDigraph, config: ExperimentConfig,
                        comparison: Comparison | None = None) -> list[RobustnessRow]:
    """Randomly delete a share of each method's core edges and re-score.

    ``fixed-core`` keeps the core node set and scores the damaged edge set
    against the undamaged graph.  ``rerun`` deletes the edges from the graph
    and extracts the method's core again from the damaged graph.  Each
    ``(method, ratio)`` cell averages ``config.trials`` seeded draws.
    """
    comp = compare_methods(g, config) if comparison is None else comparison
    jobs = [(m, ri, r) for m in comp.cores for ri, r in enumerate(config.deletion_ratios)]
    fn = partial(_robustness_cell, g=comp.graph, cores=comp.cores, k=comp.k, config=config)
    return _map(fn, jobs, config.threads)


def centrality_table(g: WeightedDigraph, method: str) -> list[tuple[str, float]]:
    s = centrality(g, method)
    return list(zip(g.labels, s.scores.tolist()))
