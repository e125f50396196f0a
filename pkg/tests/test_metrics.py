from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riccicore.core import core_from_nodes
from riccicore.graph import GraphError, WeightedDigraph
from riccicore.metrics import degree_cohesion, distance_stretch, evaluate_core
from sample_graphs import brute_force_distances, example3, example4, random_digraph, random_strong

TRIANGLE = [(0, 1), (1, 2), (2, 0)]
TWO_TRIANGLES = TRIANGLE + [(3, 4), (4, 5), (5, 3)]


def test_example3_exact():
    g = example3()
    r_in, r_out, skipped = degree_cohesion(g, ([0, 1, 2], TRIANGLE), exact=True)
    assert (r_in, r_out, skipped) == (Fraction(1), Fraction(5, 6), 0)
    assert distance_stretch(g, ([0, 1, 2], TRIANGLE)) == (1.0, 2)


def test_example4_exact():
    g = example4()
    r_in, r_out, _ = degree_cohesion(g, (range(6), TWO_TRIANGLES), exact=True)
    assert r_in == r_out == Fraction(11, 12)
    assert distance_stretch(g, (range(6), TWO_TRIANGLES)) == (None, 0)


def test_evaluate_core_examples():
    rep = evaluate_core(example3(), ([0, 1, 2], TRIANGLE))
    assert rep.as_tuple() == pytest.approx((1.0, 5 / 6, 1.0))
    assert rep.xi == 2
    rep4 = evaluate_core(example4(), (range(6), TWO_TRIANGLES))
    assert rep4.r_s is None and rep4.r_d_in == pytest.approx(11 / 12)


def test_whole_graph_is_perfectly_cohesive():
    g = random_strong(np.random.default_rng(2), 8)
    rep = evaluate_core(g, (range(8), g.edges))
    assert (rep.r_d_in, rep.r_d_out, rep.r_s) == (1.0, 1.0, None)


def test_untouched_distances_give_unit_stretch():
    # a pendant core that no residual shortest path uses
    g = WeightedDigraph.from_edges([("a", "b"), ("b", "a"), ("b", "c"), ("c", "b"), ("c", "p"),
                                    ("p", "c")])
    r_s, xi = distance_stretch(g, ([3], []))
    assert r_s == 1.0 and xi == 6


def test_stretch_counts_detours():
    # removing m forces a->b to take the long way a->x->y->b
    g = WeightedDigraph.from_edges([("a", "m"), ("m", "b"), ("a", "x"), ("x", "y"), ("y", "b")])
    r_s, xi = distance_stretch(g, ([g.node("m")], []))
    # residual ordered pairs: a->x 1/1, a->y 2/2, a->b 3/2, x->y 1/1, x->b 2/2, y->b 1/1
    assert xi == 6
    assert r_s == pytest.approx((5 + 1.5) / 6)


def test_unordered_pairs():
    g = WeightedDigraph.from_edges([("a", "m"), ("m", "b"), ("a", "x"), ("x", "y"), ("y", "b"),
                                    ("b", "a")])
    nodes = ([g.node("m")], [])
    ordered, xi_o = distance_stretch(g, nodes, "ordered")
    unordered, xi_u = distance_stretch(g, nodes, "unordered")
    assert xi_u == 6 and xi_o == 12
    assert unordered == pytest.approx(ordered)


def test_pair_mode_validation():
    with pytest.raises(ValueError):
        distance_stretch(example3(), ([0], []), "both")


def test_empty_core_rejected():
    with pytest.raises(GraphError):
        evaluate_core(example3(), ([], []))


def test_foreign_edge_rejected():
    with pytest.raises(GraphError):
        degree_cohesion(example3(), ([0, 3], [(0, 3)]))


def test_zero_degree_terms_are_skipped():
    g = WeightedDigraph.from_edges([("a", "b"), ("b", "c")])
    r_in, r_out, skipped = degree_cohesion(g, ([0, 1], [(0, 1)]))
    # a has no in-edges, b keeps 1 of 1 in-edge; a keeps 1 of 1 out-edge, b keeps 0 of 1
    assert (r_in, r_out, skipped) == (1.0, 0.5, 1)


def test_accepts_core_result():
    core = core_from_nodes(example3(), [0, 1, 2])
    assert evaluate_core(example3(), core).as_tuple() == pytest.approx((1.0, 5 / 6, 1.0))


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_invariants(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 8))
    g = random_digraph(rng, n, 0.35)
    nodes = sorted(rng.choice(n, int(rng.integers(1, n)), replace=False).tolist())
    edges = [e for e in g.edges if e[0] in nodes and e[1] in nodes]
    r_in, r_out, _ = degree_cohesion(g, (nodes, edges))
    for r in (r_in, r_out):
        assert np.isnan(r) or 0.0 <= r <= 1.0
    r_s, xi = distance_stretch(g, (nodes, edges))
    assert (r_s is None) == (xi == 0)
    if r_s is not None:
        assert r_s >= 1.0
    if edges:
        fewer = edges[:-1]
        a, b, _ = degree_cohesion(g, (nodes, fewer))
        assert np.isnan(a) or a <= r_in + 1e-12
        assert np.isnan(b) or b <= r_out + 1e-12


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_stretch_against_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 8))
    g = random_digraph(rng, n, 0.35)
    core = sorted(rng.choice(n, int(rng.integers(1, n - 1)), replace=False).tolist())
    rest = [v for v in range(n) if v not in core]
    full = brute_force_distances(g, hop=True)
    resid = brute_force_distances(g.induced_subgraph(rest), hop=True)
    ratios = [resid[i, j] / full[u, v] for i, u in enumerate(rest) for j, v in enumerate(rest)
              if i != j and np.isfinite(resid[i, j])]
    r_s, xi = distance_stretch(g, (core, []))
    assert xi == len(ratios)
    if ratios:
        assert r_s == pytest.approx(np.mean(ratios), rel=1e-12)
