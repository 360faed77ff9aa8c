import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import g1, g2, node_of
from ndfgraph.graph import Graph, complete_graph, cycle_graph, star_graph
from ndfgraph.intervals import DegreeDomainError, IntervalsList, minimal_intervals, vanilla_intervals
from ndfgraph.ndf import degree_onehot_table, degree_vector, dndf, dndf_table, mndf, vndf
from test_graph import random_graphs

# vanilla NDF vectors of the two labelled path graphs, keyed by node label
G1_TABLE = {
    1: (0, 1, 0), 9: (0, 1, 0),
    2: (1, 1, 0), 8: (1, 1, 0),
    3: (0, 2, 0), 7: (0, 2, 0),
    4: (0, 1, 1), 6: (0, 1, 1),
    5: (1, 2, 0),
    10: (0, 0, 1),
}
G2_TABLE = {
    1: (0, 1, 0), 9: (0, 1, 0),
    2: (1, 1, 0), 8: (1, 1, 0),
    6: (0, 2, 0), 7: (0, 2, 0),
    3: (0, 1, 1), 5: (0, 1, 1),
    4: (1, 2, 0),
    10: (0, 0, 1),
}


@pytest.mark.parametrize("make,table", [(g1, G1_TABLE), (g2, G2_TABLE)])
def test_labelled_path_graphs(make, table):
    g = make()
    for label, want in table.items():
        assert vndf(g, node_of(g, label)).values == want


def test_dndf_examples():
    g = g1()
    I = IntervalsList((1, 2, 3))
    assert dndf(g, node_of(g, 1), I).values == (0, 1, 0)
    assert dndf(g, node_of(g, 5), I).values == (1, 2, 0)
    assert dndf(g, node_of(g, 10), I).values == (0, 0, 1)


def test_directed_inward_zero_degree_neighbour():
    # B -> E : E's only in-neighbour B has in-degree 0
    g = Graph.from_edges(2, [(0, 1)], directed=True)
    assert dndf(g, 1, IntervalsList((0, 1), zero_based=True), "inward").values == (1, 0)
    assert dndf(g, 0, IntervalsList((0, 1), zero_based=True), "outward").values == (1, 0)


def test_directed_requires_zero_based():
    g = Graph.from_edges(2, [(0, 1)], directed=True)
    with pytest.raises(ValueError):
        dndf(g, 1, IntervalsList((1, 2)), "inward")


def test_star():
    g = star_graph(9)
    assert vndf(g, 0).values == (9,) + (0,) * 8
    assert mndf(g, 0).values == (9, 0)
    assert mndf(g, 3).values == (0, 1)


def test_c6():
    g = cycle_graph(6)
    assert all(vndf(g, v).values == (0, 2) for v in range(6))


def test_degree_vector():
    g = g1()
    I = IntervalsList((1, 2, 3))
    assert degree_vector(g, node_of(g, 5), I).values == (0, 0, 1)
    assert degree_vector(g, node_of(g, 10), I).values == (1, 0, 0)
    assert degree_vector(complete_graph(2), 0, IntervalsList((1,))).values == (1,)


def test_degree_vector_isolated_raises():
    g = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(DegreeDomainError):
        degree_vector(g, 2, IntervalsList((1,)))


def test_l1_norm_is_degree(any_graph):
    g = any_graph
    table = dndf_table(g, vanilla_intervals(g))
    assert table.sum(axis=1).tolist() == g.out_degrees.tolist()


def test_table_matches_per_node(any_graph):
    g = any_graph
    for I in (vanilla_intervals(g), minimal_intervals(g), IntervalsList((1, 3))):
        table = dndf_table(g, I)
        for v in range(g.n_nodes):
            assert tuple(table[v]) == dndf(g, v, I).values


def test_directed_table_matches_per_node():
    rng = np.random.default_rng(4)
    edges = {(int(a), int(b)) for a, b in rng.integers(30, size=(90, 2)) if a != b}
    g = Graph.from_edges(30, sorted(edges), directed=True)
    for direction in ("inward", "outward"):
        I = vanilla_intervals(g, direction)
        table = dndf_table(g, I, direction)
        degs = g.degrees(direction)
        for v in range(30):
            assert tuple(table[v]) == dndf(g, v, I, direction).values
            assert table[v].sum() == degs[v]


def test_vanilla_and_minimal_agree_on_occurring_columns(any_graph):
    g = any_graph
    van = dndf_table(g, vanilla_intervals(g))
    occurring = sorted(set(g.out_degrees.tolist()) - {0})
    # interval j of the minimal list holds exactly one occurring degree
    mini = dndf_table(g, minimal_intervals(g))
    assert np.array_equal(van[:, [d - 1 for d in occurring]], mini)


def test_single_interval_is_degree(any_graph):
    table = dndf_table(any_graph, IntervalsList((1,)))
    assert table[:, 0].tolist() == any_graph.out_degrees.tolist()


def test_onehot_table():
    g = g1()
    t = degree_onehot_table(g, IntervalsList((1, 2, 3)))
    assert t.sum(axis=1).tolist() == [1] * 10
    assert t[node_of(g, 5)].tolist() == [0, 0, 1]


@settings(max_examples=60, deadline=None)
@given(random_graphs(), st.randoms(use_true_random=False))
def test_isomorphism_invariance(g, rnd):
    if g.n_edges == 0:
        return
    perm = list(range(g.n_nodes))
    rnd.shuffle(perm)
    h = g.relabeled(perm)
    I = vanilla_intervals(g)
    a = sorted(map(tuple, dndf_table(g, I).tolist()))
    b = sorted(map(tuple, dndf_table(h, I).tolist()))
    assert a == b
