import numpy as np
import pytest
from hypothesis import given, strategies as st

from netdepth import (GraphError, apply_weight_transform, from_edges,
                      largest_connected_component, parse_edge_list, parse_metadata,
                      serialize_edge_list)
from netdepth.graph import components, is_connected


def test_minimal_path_graph():
    g = parse_edge_list("a b\nb c")
    assert g.n_nodes == 3 and g.n_edges == 2
    assert g.labels == ("a", "b", "c")
    assert np.all(g.weight == 1.0)
    assert not g.directed and not g.weighted


def test_duplicates_merge_by_weight_sum():
    g = parse_edge_list("a b 2\na b 3", weighted=True)
    assert g.n_edges == 1
    assert g.weight[0] == 5.0
    assert g.stats.merged_duplicates == 1
    again = parse_edge_list(serialize_edge_list(g), weighted=True)
    assert again.n_edges == 1 and again.weight[0] == 5.0


def test_reversed_duplicate_merges_when_undirected():
    g = parse_edge_list("a b 1\nb a 4", weighted=True)
    assert g.n_edges == 1 and g.weight[0] == 5.0
    d = parse_edge_list("a b 1\nb a 4", directed=True, weighted=True)
    assert d.n_edges == 2


def test_self_loop_dropped():
    g = parse_edge_list("a a 1", weighted=True)
    assert g.n_edges == 0
    assert g.n_nodes == 1
    assert g.stats.dropped_self_loops == 1


def test_comments_and_node_directives():
    g = parse_edge_list("% konect header\n# comment\n#! node z\nx y\n")
    assert g.labels == ("z", "x", "y")
    assert g.n_edges == 1


def test_parse_errors():
    with pytest.raises(GraphError):
        parse_edge_list("")
    with pytest.raises(GraphError, match="line 2"):
        parse_edge_list("a b\na b c d")
    with pytest.raises(GraphError, match="weight"):
        parse_edge_list("a b -1", weighted=True)
    with pytest.raises(GraphError, match="weight"):
        parse_edge_list("a b x", weighted=True)


def test_undirected_edges_stored_once_sorted():
    g = parse_edge_list("c a\nb a\n")
    assert np.all(g.src <= g.dst)
    assert g.n_edges == 2


def test_lcc_of_connected_graph_is_identity():
    g = from_edges("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    sub, mapping = largest_connected_component(g)
    assert sub.labels == g.labels
    assert mapping == {0: 0, 1: 1, 2: 2}
    assert sub.n_edges == 3


def test_lcc_drops_isolate():
    g = from_edges("abcd", [("a", "b"), ("b", "c"), ("a", "c")])
    sub, mapping = largest_connected_component(g)
    assert sub.labels == ("a", "b", "c")
    assert 3 not in mapping


def test_lcc_uses_weak_connectivity():
    g = from_edges("abc", [("a", "b"), ("c", "b")], directed=True)
    sub, _ = largest_connected_component(g)
    assert sub.n_nodes == 3


@pytest.mark.parametrize("transform,expected", [("reciprocal", 0.5), ("unit", 1.0),
                                                ("identity", 2.0)])
def test_weight_transforms(transform, expected):
    g = from_edges("ab", [("a", "b", 2)])
    assert apply_weight_transform(g, transform).weight[0] == expected


def test_metadata_csv():
    meta = parse_metadata("label,key,value\n1,club,Mr. Hi\n1,name,x\n2,club,Officer\n")
    assert meta["1"] == {"club": "Mr. Hi", "name": "x"}
    with pytest.raises(GraphError):
        parse_metadata("1,club\n")


def test_graph_invariants_enforced():
    from netdepth.graph import Graph

    with pytest.raises(GraphError):
        Graph(("a", "a"), [0], [1], [1.0])
    with pytest.raises(GraphError):
        Graph(("a", "b"), [1], [0], [1.0])
    with pytest.raises(GraphError):
        Graph(("a", "b"), [0], [1], [0.0])
    with pytest.raises(GraphError):
        Graph(("a", "b"), [0], [0], [1.0])


def test_karate_bundle(karate):
    assert karate.n_nodes == 34 and karate.n_edges == 78
    assert karate.labels == tuple(str(i) for i in range(1, 35))
    assert karate.metadata["1"]["name"] == "Mr. Hi"
    assert karate.metadata["34"]["name"] == "John A."
    assert is_connected(karate)


# ---------------------------------------------------------------- properties

edge_lists = st.lists(
    st.tuples(st.integers(0, 9), st.integers(0, 9), st.integers(1, 5)), min_size=1, max_size=30)


def _text(edges):
    return "\n".join(f"n{a} n{b} {w}" for a, b, w in edges)


@given(edge_lists, st.booleans(), st.booleans())
def test_parse_serialize_parse_idempotent(edges, directed, weighted):
    g1 = parse_edge_list(_text(edges), directed=directed, weighted=weighted)
    g2 = parse_edge_list(serialize_edge_list(g1), directed=directed, weighted=weighted)
    assert g2.labels == g1.labels
    assert np.array_equal(g2.src, g1.src) and np.array_equal(g2.dst, g1.dst)
    assert np.array_equal(g2.weight, g1.weight)
    assert serialize_edge_list(g2) == serialize_edge_list(g1)


@given(edge_lists, st.booleans())
def test_lcc_connected_and_maximal(edges, directed):
    g = parse_edge_list(_text(edges), directed=directed)
    sub, mapping = largest_connected_component(g)
    assert is_connected(sub)
    inside = set(mapping)
    for s, d in zip(g.src.tolist(), g.dst.tolist()):
        assert (s in inside) == (d in inside)
    assert sub.n_nodes == np.bincount(components(g)).max()


@given(edge_lists, st.sampled_from(["unit", "reciprocal", "identity"]), st.booleans())
def test_weight_transform_preserves_shape(edges, transform, directed):
    g = parse_edge_list(_text(edges), directed=directed, weighted=True)
    h = apply_weight_transform(g, transform)
    assert (h.n_nodes, h.n_edges, h.directed) == (g.n_nodes, g.n_edges, g.directed)
