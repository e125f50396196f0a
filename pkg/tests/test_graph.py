import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riccicore.augmentation import augment_to_strong
from riccicore.graph import (
    EdgeListParseError,
    GraphError,
    UnknownNodeError,
    WeightedDigraph,
    all_pairs_distances,
    all_pairs_hop_distances,
    condensation,
    graph_from_dict,
    graph_stats,
    graph_to_dict,
    is_strongly_connected,
    is_weakly_connected,
    largest_weakly_connected_component,
    load_edge_list,
    parse_edge_list,
    read_graph,
    shortest_path_distance,
    single_source_distances,
    strongly_connected_components,
    to_edge_list,
    weakly_connected_components,
)
from sample_graphs import INF, brute_force_distances, cycle, example2, g1, g2, random_digraph


@st.composite
def digraphs(draw, max_n=7, p=None):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u, v in itertools.permutations(range(n), 2)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    weights = draw(st.lists(st.floats(0.1, 10.0), min_size=len(chosen), max_size=len(chosen)))
    return WeightedDigraph([f"n{i}" for i in range(n)], [e[0] for e in chosen],
                           [e[1] for e in chosen], weights)


# -- construction and ingestion ---------------------------------------------


def test_example1_edge_list():
    g = load_edge_list("x y\ny z\nz x\nx z")
    assert (g.n, g.m) == (3, 4)
    assert g.weights.tolist() == [1.0] * 4
    assert g.labels == ("x", "y", "z")


def test_empty_input():
    g = load_edge_list("")
    assert (g.n, g.m) == (0, 0)


def test_duplicate_keeps_first():
    parsed = parse_edge_list("a b 2.5\na b 3.0")
    assert parsed.graph.m == 1
    assert parsed.graph.weights[0] == 2.5
    assert parsed.duplicates == 1


def test_self_loops_dropped_and_counted():
    parsed = parse_edge_list("a a\na b\n")
    assert parsed.self_loops == 1
    assert parsed.graph.edges == [(0, 1)]


def test_comments_and_blank_lines():
    g = load_edge_list("# header\n% konect header\n\na b\n")
    assert g.m == 1


def test_malformed_line_reports_line_number():
    with pytest.raises(EdgeListParseError) as err:
        load_edge_list("a b\nlonely\n")
    assert err.value.lineno == 2


@pytest.mark.parametrize("text", ["a b 0", "a b -1", "a b nan", "a b inf", "a b x"])
def test_bad_weights_rejected(text):
    with pytest.raises(EdgeListParseError):
        load_edge_list(text)


def test_ignore_weights_accepts_extra_columns():
    g = load_edge_list("a b 3 1700000000\nb a 2 1", ignore_weights=True)
    assert g.weights.tolist() == [1.0, 1.0]


def test_invalid_graphs_rejected():
    with pytest.raises(GraphError):
        WeightedDigraph(["a", "b"], [0], [0])
    with pytest.raises(GraphError):
        WeightedDigraph(["a", "b"], [0, 0], [1, 1])
    with pytest.raises(GraphError):
        WeightedDigraph(["a", "b"], [0], [1], [0.0])
    with pytest.raises(GraphError):
        WeightedDigraph(["a", "a"], [0], [1])


def test_graph_is_immutable():
    g = g1()
    with pytest.raises(ValueError):
        g.weights[0] = 5.0


def test_adjacency_consistent_with_edges():
    g = example2()
    for v in range(g.n):
        assert sorted(g.dst[g.out_edges[v]].tolist()) == sorted(g.successors[v])
        assert all(g.dst[e] == v for e in g.in_edges[v])
    assert g.out_degree().sum() == g.in_degree().sum() == g.m


def test_node_lookup():
    g = example2()
    assert g.node("z3") == 4
    assert g.node(2) == 2
    with pytest.raises(UnknownNodeError):
        g.node("nope")
    with pytest.raises(UnknownNodeError):
        g.node(17)


def test_edge_list_round_trip():
    g = load_edge_list(to_edge_list(random_digraph(np.random.default_rng(3), 9, 0.3)))
    assert load_edge_list(to_edge_list(g)) == g


def test_json_round_trip_keeps_artificial(tmp_path):
    g = augment_to_strong(example2(), 100.0).graph
    path = tmp_path / "g.json"
    path.write_text(json.dumps(graph_to_dict(g)))
    assert read_graph(path) == g
    assert graph_from_dict(graph_to_dict(g)).artificial.sum() == 2


@given(digraphs(max_n=8))
def test_round_trip_property(g):
    loaded = load_edge_list(to_edge_list(g))
    assert load_edge_list(to_edge_list(loaded)) == loaded
    assert graph_from_dict(graph_to_dict(g)) == g


# -- components -------------------------------------------------------------


def test_largest_weak_component():
    g = WeightedDigraph.from_edges([("a", "b"), ("b", "a"), ("c", "d"), ("d", "e"), ("e", "c")])
    h = largest_weakly_connected_component(g)
    assert h.labels == ("c", "d", "e")
    assert h.m == 3


def test_largest_weak_component_tie_goes_to_smallest_index():
    g = WeightedDigraph.from_edges([("a", "b"), ("c", "d")])
    assert largest_weakly_connected_component(g).labels == ("a", "b")


def test_largest_weak_component_of_connected_graph_is_itself():
    assert largest_weakly_connected_component(g2()) == g2()


def test_scc_examples():
    assert [sorted(c) for c in strongly_connected_components(g1())] == [[0, 1, 2]]
    assert len(strongly_connected_components(example2())) == 6
    single = WeightedDigraph(["a"], [], [])
    assert strongly_connected_components(single) == [[0]]


def test_connectivity_examples():
    assert is_strongly_connected(g1())
    assert not is_strongly_connected(g2()) and is_weakly_connected(g2())
    isolated = WeightedDigraph(["x", "y", "z", "w"], [0, 1, 2], [1, 2, 0])
    assert not is_weakly_connected(isolated)
    empty = WeightedDigraph([], [], [])
    assert is_strongly_connected(empty) and is_weakly_connected(empty)


@given(digraphs(max_n=9))
def test_scc_partition_and_condensation_acyclic(g):
    comps = strongly_connected_components(g)
    assert sorted(v for c in comps for v in c) == list(range(g.n))
    cond = condensation(g)
    # reverse topological order: every condensation edge goes to an earlier component
    for k, succ in enumerate(cond.successors):
        assert all(j < k for j in succ)
    assert is_strongly_connected(g) == (len(comps) == 1)
    assert is_weakly_connected(g) == (len(weakly_connected_components(g)) == 1)


@given(digraphs(max_n=9))
def test_scc_matches_networkx(g):
    nx = pytest.importorskip("networkx")
    h = nx.DiGraph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    ours = {frozenset(c) for c in strongly_connected_components(g)}
    assert ours == {frozenset(c) for c in nx.strongly_connected_components(h)}


# -- distances --------------------------------------------------------------


def test_distance_examples():
    ga = augment_to_strong(example2(), 100.0).graph
    assert shortest_path_distance(ga, "z3", "z1") == 100.0
    assert shortest_path_distance(ga, "x", "z1") == 102.0
    assert shortest_path_distance(g2(), "z", "x") == INF
    assert single_source_distances(cycle(3), 0).tolist() == [0.0, 1.0, 2.0]
    assert single_source_distances(WeightedDigraph(["a"], [], []), 0).tolist() == [0.0]
    assert all_pairs_hop_distances(g1()).max() == 2


def test_unknown_node_distance():
    with pytest.raises(UnknownNodeError):
        shortest_path_distance(g1(), "x", "q")


@given(digraphs(max_n=7))
def test_distances_match_brute_force(g):
    np.testing.assert_allclose(all_pairs_distances(g), brute_force_distances(g), rtol=1e-12)
    np.testing.assert_array_equal(all_pairs_hop_distances(g), brute_force_distances(g, hop=True))


@given(digraphs(max_n=8))
def test_quasi_metric(g):
    d = all_pairs_distances(g)
    assert np.all(np.diag(d) == 0) and np.all(d >= 0)
    lhs = d[:, None, :]
    rhs = d[:, :, None] + d[None, :, :]
    assert np.all(lhs <= rhs + 1e-9)


# -- statistics -------------------------------------------------------------


def test_stats_cycle():
    s = graph_stats(cycle(3))
    assert (s.vertices, s.edges, s.diameter) == (3, 3, 2)
    assert s.density == 0.5
    assert s.avg_degree == 2.0


def test_stats_counts_in_and_out_degree():
    s = graph_stats(g1())
    assert s.avg_degree == pytest.approx(8 / 3)
    assert s.density == pytest.approx(4 / 6)
    assert s.diameter == 2


def test_stats_diameter_over_reachable_pairs():
    # path a->b->c: the only finite hop distances are 1 and 2
    s = graph_stats(WeightedDigraph.from_edges([("a", "b"), ("b", "c")]))
    assert s.diameter == 2
