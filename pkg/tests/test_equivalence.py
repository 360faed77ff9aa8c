import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ndfgraph.equivalence as eq
from conftest import g1, g2, node_of, two_triangles
from ndfgraph.equivalence import (
    NodePartition,
    class_counts,
    color_refinement,
    diameter,
    graphs_ndf_equivalent,
    graphs_rndfc_equivalent,
    graphs_wl_equivalent,
    ndf_partition,
    rndfc_partition,
)
from ndfgraph.graph import Graph, complete_graph, cycle_graph, dual_barabasi_albert, path_graph, star_graph
from ndfgraph.intervals import vanilla_intervals
from ndfgraph.matrix import rndfc
from test_graph import random_graphs


def label_classes(g, part):
    return sorted(sorted(g.labels[v] for v in cls) for cls in part.classes())


class TestNdfPartition:
    def test_g1(self):
        g = g1()
        assert label_classes(g, ndf_partition(g)) == [[1, 9], [2, 8], [3, 7], [4, 6], [5], [10]]

    def test_c6_and_star(self):
        assert ndf_partition(cycle_graph(6)).n_classes == 1
        assert ndf_partition(star_graph(9)).n_classes == 2

    def test_class_ids_by_first_appearance(self):
        part = ndf_partition(star_graph(3))
        assert part.labels == (0, 1, 1, 1)
        assert part.signatures[0] == (3, 0, 0)

    def test_labels_match_signatures(self, any_graph):
        part = ndf_partition(any_graph)
        sigs = eq.ndf_signatures(any_graph)
        for u in range(any_graph.n_nodes):
            assert part.signatures[part.labels[u]] == sigs[u]

    def test_directed_rejected(self):
        with pytest.raises(ValueError):
            ndf_partition(Graph.from_edges(2, [(0, 1)], directed=True))


class TestGraphNdfEquivalence:
    def test_g1_g2(self):
        assert graphs_ndf_equivalent(g1(), g2())

    def test_c6_two_triangles(self):
        assert graphs_ndf_equivalent(cycle_graph(6), two_triangles())

    def test_k2_path3(self):
        assert not graphs_ndf_equivalent(complete_graph(2), path_graph(3))

    def test_multiplicities_matter(self):
        # same max degree and same image set, different multiplicities
        a = Graph.from_edges(4, [(0, 1), (2, 3)])
        b = Graph.from_edges(6, [(0, 1), (2, 3), (4, 5)])
        assert not graphs_ndf_equivalent(a, b)


class TestRndfc:
    def test_c6_two_triangles_order3(self):
        assert not graphs_rndfc_equivalent(cycle_graph(6), two_triangles(), 3)

    def test_c6_two_triangles_order1(self):
        # order 1 only sees radius <= 1, where both graphs look alike
        assert graphs_rndfc_equivalent(cycle_graph(6), two_triangles(), 1)

    def test_g1_g2_order3_against_brute_force(self):
        a, b = g1(), g2()
        I = vanilla_intervals(a)

        def multiset(g):
            return sorted(rndfc(g, v, 3, I).values.tobytes() for v in range(g.n_nodes))

        assert (multiset(a) == multiset(b)) == graphs_rndfc_equivalent(a, b, 3)
        assert not graphs_rndfc_equivalent(a, b, 3)

    def test_default_order_is_diameter(self):
        assert diameter(cycle_graph(6)) == 3 and diameter(two_triangles()) == 1
        assert not graphs_rndfc_equivalent(cycle_graph(6), two_triangles())

    def test_different_max_degree(self):
        assert not graphs_rndfc_equivalent(complete_graph(2), path_graph(3), 2)

    def test_refines_ndf_partition(self, any_graph):
        fine = rndfc_partition(any_graph, 3)
        assert fine.refines(ndf_partition(any_graph))

    def test_order_validation(self):
        with pytest.raises(ValueError):
            rndfc_partition(cycle_graph(4), 0)

    def test_small_and_sparse_paths_agree(self, monkeypatch):
        g = dual_barabasi_albert(150, 0.5, 3, 1, 4)
        small = eq.rndfc_signatures(g, 3), eq.ndf_signatures(g)
        monkeypatch.setattr(eq, "SMALL_GRAPH", 0)
        assert (eq.rndfc_signatures(g, 3), eq.ndf_signatures(g)) == small


class TestColorRefinement:
    def test_c6_and_two_triangles_single_class(self):
        for g in (cycle_graph(6), two_triangles()):
            part, rounds = color_refinement(g)
            assert part.n_classes == 1 and rounds == 0
        assert graphs_wl_equivalent(cycle_graph(6), two_triangles())

    def test_star(self):
        part, rounds = color_refinement(star_graph(9))
        assert part.n_classes == 2 and rounds == 1

    def test_path_needs_several_rounds(self):
        part, rounds = color_refinement(path_graph(7))
        assert part.n_classes == 4 and rounds == 3

    def test_max_rounds_caps(self):
        part, rounds = color_refinement(path_graph(7), max_rounds=1)
        assert part.n_classes == 2 and rounds == 1

    def test_two_rounds_is_ndf_partition(self, any_graph):
        part, _ = color_refinement(any_graph, max_rounds=2)
        assert part.labels == ndf_partition(any_graph).labels

    def test_full_refinement_separates_g1_g2(self):
        # NDF-equivalent, yet further rounds tell them apart
        assert graphs_ndf_equivalent(g1(), g2())
        assert not graphs_wl_equivalent(g1(), g2())
        assert graphs_wl_equivalent(g1(), g1().relabeled(list(reversed(range(10)))))
        assert not graphs_wl_equivalent(path_graph(4), star_graph(3))

    def test_class_counts(self):
        assert class_counts(ndf_partition(star_graph(4))) == [4, 1]


@settings(max_examples=60, deadline=None)
@given(random_graphs(12), st.randoms(use_true_random=False))
def test_isomorphic_graphs_never_distinguished(g, rnd):
    perm = list(range(g.n_nodes))
    rnd.shuffle(perm)
    h = g.relabeled(perm)
    assert graphs_ndf_equivalent(g, h)
    assert graphs_wl_equivalent(g, h)
    for r in (1, 2, 4):
        assert graphs_rndfc_equivalent(g, h, r)


@settings(max_examples=60, deadline=None)
@given(random_graphs(12))
def test_two_round_identity_random(g):
    assert color_refinement(g, 2)[0].labels == ndf_partition(g).labels
