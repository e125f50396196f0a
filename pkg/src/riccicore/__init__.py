"""Ricci curvature, discrete Ricci flow and core-subgraph extraction on directed weighted graphs."""

__version__ = "0.1.0"

from .augmentation import AugmentationResult, augment_to_strong, strip_artificial
from .baselines import (
    CentralityScores,
    baseline_core,
    betweenness_centrality,
    closeness_centrality,
    degree_centrality,
    pagerank,
)
from .core import (
    CoreResult,
    ExtractionConfig,
    PipelineResult,
    cut_heaviest_edges,
    extract_core,
    run_pipeline,
)
from .curvature import EdgeCurvature, all_edge_curvatures, edge_curvature, out_measure
from .experiments import ExperimentConfig, alpha_sweep, compare_methods, robustness_deletion
from .flow import FlowConfig, FlowTrace, flow_step, run_flow
from .graph import (
    GraphStats,
    WeightedDigraph,
    graph_stats,
    is_strongly_connected,
    is_weakly_connected,
    largest_weakly_connected_component,
    load_edge_list,
    read_graph,
    shortest_path_distance,
    strongly_connected_components,
)
from .metrics import MetricsReport, degree_cohesion, distance_stretch, evaluate_core
from .transport import ProbMeasure, TransportPlan, kantorovich_dual_value, wasserstein

__all__ = [
    "AugmentationResult", "CentralityScores", "CoreResult", "EdgeCurvature", "ExperimentConfig",
    "ExtractionConfig", "FlowConfig", "FlowTrace", "GraphStats", "MetricsReport",
    "PipelineResult", "ProbMeasure", "TransportPlan", "WeightedDigraph",
    "all_edge_curvatures", "alpha_sweep", "augment_to_strong", "baseline_core",
    "betweenness_centrality", "closeness_centrality", "compare_methods", "cut_heaviest_edges",
    "degree_centrality", "degree_cohesion", "distance_stretch", "edge_curvature",
    "evaluate_core", "extract_core", "flow_step", "graph_stats", "is_strongly_connected",
    "is_weakly_connected", "kantorovich_dual_value", "largest_weakly_connected_component",
    "load_edge_list", "out_measure", "pagerank", "read_graph", "robustness_deletion",
    "run_flow", "run_pipeline", "shortest_path_distance", "strip_artificial",
    "strongly_connected_components", "wasserstein",
]
