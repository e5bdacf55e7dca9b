import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypergcl.data import (Graph, Hypergraph, IncidenceCOO, hypergraph_from_incidence,
                           incidence_of, load_features, load_graph, load_hypergraph,
                           load_labels, save_hypergraph, split_nodes)
from hypergcl.errors import ContractViolation, ParseError


def test_load_graph_path(tmp_path):
    p = tmp_path / "edges.txt"
    p.write_text("0 1\n1 2\n")
    g = load_graph(p, 3)
    assert g.num_nodes == 3
    assert g.num_edges == 2
    assert list(g.neighbors(1)) == [0, 2]


def test_load_graph_dedups_reversed(tmp_path):
    p = tmp_path / "edges.txt"
    p.write_text("0 1\n1 0\n")
    g = load_graph(p, 2)
    assert g.num_edges == 1
    assert list(g.neighbors(0)) == [1]


def test_load_graph_weights_and_comments(tmp_path):
    p = tmp_path / "edges.txt"
    p.write_text("# header comment\n0 1 2.5\n1 2  # trailing\n")
    g = load_graph(p, 3)
    assert g.num_edges == 2
    assert g.neighbor_weights(0)[0] == 2.5
    assert g.neighbor_weights(2)[0] == 1.0  # missing weight defaults


def test_load_graph_malformed_line_number(tmp_path):
    p = tmp_path / "edges.txt"
    p.write_text("0 1\nnot an edge line at all\n")
    with pytest.raises(ParseError, match="line 2"):
        load_graph(p, 3)


def test_load_graph_range_error(tmp_path):
    p = tmp_path / "edges.txt"
    p.write_text("0 7\n")
    with pytest.raises(ParseError, match="out of range"):
        load_graph(p, 3)


def test_self_loop_dropped(caplog):
    g = Graph.from_edges(3, [(0, 0), (0, 1)])
    assert g.num_edges == 1


@given(edges=st.lists(st.tuples(st.integers(0, 14), st.integers(0, 14)),
                      max_size=60))
@settings(max_examples=50, deadline=None)
def test_graph_adjacency_symmetric(edges):
    g = Graph.from_edges(15, edges)
    for u in range(15):
        for v in g.neighbors(u):
            assert u in g.neighbors(v)


def test_split_sizes_100():
    labels = np.repeat(np.arange(5), 20)
    sp = split_nodes(labels, seed=0)
    assert (sp.train.size, sp.val.size, sp.test.size) == (10, 10, 80)


def test_split_deterministic():
    labels = np.repeat(np.arange(4), 25)
    a = split_nodes(labels, seed=7)
    b = split_nodes(labels, seed=7)
    assert np.array_equal(a.train, b.train)
    assert np.array_equal(a.val, b.val)
    assert np.array_equal(a.test, b.test)


def test_split_citation_scale_sizes():
    # 2708 nodes over 7 classes; expected train size by per-class arithmetic
    sizes = [351, 217, 418, 818, 426, 298, 180]
    assert sum(sizes) == 2708
    labels = np.concatenate([np.full(s, c) for c, s in enumerate(sizes)])
    expected_train = sum(round(0.1 * s) for s in sizes)
    seen = set()
    for seed in range(10):
        sp = split_nodes(labels, seed=seed)
        assert sp.train.size == expected_train
        assert expected_train in (270, 271)
        seen.add(tuple(sp.train.tolist()))
    assert len(seen) == 10  # distinct splits per seed


def test_split_stratified_per_class():
    labels = np.repeat(np.arange(3), 40)
    sp = split_nodes(labels, seed=1)
    for c in range(3):
        assert (labels[sp.train] == c).sum() == 4


def test_split_small_class_warns_and_shuffles(caplog):
    labels = np.array([0] * 50 + [1] * 2)
    with caplog.at_level("WARNING"):
        sp = split_nodes(labels, seed=0)
    assert "falling back" in caplog.text
    assert sp.train.size + sp.val.size + sp.test.size == 52


@given(seed=st.integers(0, 100), n=st.integers(10, 80))
@settings(max_examples=30, deadline=None)
def test_split_partition_property(seed, n):
    labels = np.arange(n) % 3
    sp = split_nodes(labels, seed=seed)
    merged = np.concatenate([sp.train, sp.val, sp.test])
    assert np.array_equal(np.sort(merged), np.arange(n))


def test_incidence_examples():
    h = Hypergraph(2, [np.array([0, 1])], "local")
    assert incidence_of(h).tolist() == [[1], [1]]
    h2 = Hypergraph(2, [np.array([0]), np.array([1])], "local")
    assert np.array_equal(incidence_of(h2), np.eye(2, dtype=np.uint8))


@given(st.lists(st.lists(st.integers(0, 7), min_size=1, max_size=8),
                min_size=1, max_size=10))
@settings(max_examples=50, deadline=None)
def test_incidence_round_trip(raw):
    h = Hypergraph(8, [np.array(sorted(set(he))) for he in raw], "global")
    back = hypergraph_from_incidence(incidence_of(h), "global")
    assert back.num_hyperedges == h.num_hyperedges
    for a, b in zip(h.hyperedges, back.hyperedges):
        assert np.array_equal(a, b)


def test_memberships_transpose():
    h = Hypergraph(4, [np.array([0, 1]), np.array([1, 2, 3])], "local")
    memb = h.node_memberships
    assert memb[1].tolist() == [0, 1]
    assert memb[0].tolist() == [0]
    coo = IncidenceCOO(h)
    assert coo.nnz == 5
    # canonical order sorted by (hyperedge, node)
    assert coo.ej.tolist() == [0, 0, 1, 1, 1]
    assert coo.ni.tolist() == [0, 1, 1, 2, 3]
    # node_perm regroups by node
    assert coo.ni[coo.node_perm].tolist() == [0, 1, 1, 2, 3]
    assert coo.ej[coo.node_perm].tolist() == [0, 0, 1, 1, 1]


def test_empty_hyperedge_rejected():
    with pytest.raises(ContractViolation):
        Hypergraph(3, [np.array([], dtype=np.int64)], "local")


def test_hypergraph_text_round_trip(tmp_path):
    h = Hypergraph(5, [np.array([0, 4]), np.array([1, 2, 3])], "attribute")
    p = tmp_path / "view.txt"
    save_hypergraph(h, p)
    back = load_hypergraph(p, 5)
    assert back.view_tag == "attribute"
    for a, b in zip(h.hyperedges, back.hyperedges):
        assert np.array_equal(a, b)


def test_load_features_header_optional(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("f0,f1\n1,2\n3,4\n")
    x = load_features(p, 2)
    assert x.tolist() == [[1.0, 2.0], [3.0, 4.0]]
    p2 = tmp_path / "x2.csv"
    p2.write_text("1,2\n3,4\n")
    assert np.array_equal(load_features(p2, 2), x)


def test_load_features_wrong_rows(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("1,2\n")
    with pytest.raises(ParseError):
        load_features(p, 3)


def test_load_labels_strings_mapped(tmp_path):
    p = tmp_path / "y.csv"
    p.write_text("theory\nneural\ntheory\n")
    labels = load_labels(p, 3)
    assert labels.tolist() == [1, 0, 1]  # lexicographic class ids
