import itertools
import json
import random

import networkx as nx
import pytest
from hypothesis import given, settings

from dichroma.colouring import ColouringConstraints, enumerate_colourings, find_colouring, verify_colouring
from dichroma.digraph import (Digraph, Graph, complete_graph, glue_graphs,
                              octahedron_graph, wagner_graph)
from dichroma.errors import (BudgetExceeded, HasK5Minor, MonochromaticTrianglePre,
                             PreDomainNotEdgeOrTriangle)
from dichroma.experiments import load_corpus
from dichroma.minors import (K5, K33, Leaf, Sum, has_minor, is_planar, is_planar_by_minors,
                             is_wagner_V8, k5_edge_gadgets, leaves, node_edges, random_k5_minor_free,
                             recompose, search_k33free_counterexample, structured_colouring,
                             tree_from_json, tree_to_json, wagner_decompose)
from dichroma.planar import generate_stacked
from dichroma import kernels

from oracles import brute_has_minor
from strategies import graphs

CUBE = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4),
                 (0, 4), (1, 5), (2, 6), (3, 7)])
TWO_K4 = Graph(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4)])


def random_orientation(G, rng):
    return Digraph(G.n, kernels.orientation_arcs(G.edges, rng.getrandbits(len(G.edges))))


class TestHasMinor:
    def test_examples(self):
        w = has_minor(complete_graph(6), K5)
        assert w is not None and w.verify(complete_graph(6), K5)
        assert has_minor(octahedron_graph(), K5) is None
        w = has_minor(wagner_graph(), K33)
        assert w is not None and w.verify(wagner_graph(), K33)
        assert has_minor(wagner_graph(), K5) is None

    def test_petersen_has_both(self):
        P = Graph(10, nx.petersen_graph().edges)
        for H in (K5, K33):
            w = has_minor(P, H)
            assert w is not None and w.verify(P, H)

    def test_witness_rejects_tampering(self):
        G = complete_graph(6)
        w = has_minor(G, K5)
        from dichroma.minors import MinorWitness
        bad = MinorWitness(w.branch_sets[:-1] + (w.branch_sets[0],), w.connections)
        assert not bad.verify(G, K5)

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            has_minor(complete_graph(21), K5)
        with pytest.raises(BudgetExceeded):
            has_minor(complete_graph(10), complete_graph(9))

    @settings(max_examples=120, deadline=None)
    @given(graphs(min_n=5, max_n=8))
    def test_agrees_with_contraction_oracle(self, G):
        for H in (K5, K33):
            w = has_minor(G, H)
            assert (w is not None) == brute_has_minor(G.n, G.edges, H.n, H.edges)
            if w is not None:
                assert w.verify(G, H)

    @settings(max_examples=80, deadline=None)
    @given(graphs(min_n=1, max_n=9))
    def test_minor_planarity_matches_networkx(self, G):
        assert is_planar_by_minors(G) == is_planar(G)


class TestPlanarityAndV8:
    def test_is_planar_examples(self):
        assert is_planar(complete_graph(4)) and is_planar_by_minors(complete_graph(4))
        assert not is_planar(K5) and not is_planar_by_minors(K5)
        assert not is_planar(wagner_graph()) and not is_planar_by_minors(wagner_graph())

    def test_v8_examples(self):
        assert is_wagner_V8(wagner_graph())
        assert not is_wagner_V8(CUBE)
        assert is_planar(CUBE)
        assert not is_wagner_V8(complete_graph(4))

    def test_v8_relabelled(self):
        rng = random.Random(2)
        for _ in range(20):
            perm = list(range(8))
            rng.shuffle(perm)
            assert is_wagner_V8(wagner_graph().relabel(perm))


class TestDecompose:
    def test_planar_is_a_leaf(self):
        tree = wagner_decompose(octahedron_graph())
        assert isinstance(tree, Leaf) and tree.kind == "planar"

    def test_two_k4_sharing_a_triangle(self):
        # planar, so a single leaf unless clique separators are cut
        assert isinstance(wagner_decompose(TWO_K4), Leaf)
        tree = wagner_decompose(TWO_K4, split_clique_separators=True)
        assert isinstance(tree, Sum) and tree.i == 3
        assert tree.clique == (0, 1, 2) and tree.deleted_edges == ()
        assert {l.kind for l in leaves(tree)} == {"planar"}
        assert recompose(tree) == TWO_K4

    def test_v8_with_pendant(self):
        G = Graph(9, list(wagner_graph().edges) + [(0, 8)])
        tree = wagner_decompose(G)
        assert isinstance(tree, Sum) and tree.i == 1
        kinds = sorted((l.kind, len(l.vertices)) for l in leaves(tree))
        assert kinds == [("V8", 8), ("planar", 2)]
        assert recompose(tree) == G

    def test_k6_has_k5_minor(self):
        with pytest.raises(HasK5Minor) as exc:
            wagner_decompose(complete_graph(6))
        assert exc.value.witness.verify(complete_graph(6), K5)

    def test_completion_edges_recorded(self):
        # two V8 copies sharing an edge that is then deleted: the separator is completed again
        V = wagner_graph()
        G = glue_graphs(V, V, {0: 0, 1: 1})
        G = Graph(G.n, [e for e in G.edges if e != (0, 1)])
        tree = wagner_decompose(G)
        assert recompose(tree) == G
        assert isinstance(tree, Sum) and tree.clique == (0, 1)
        assert tree.deleted_edges == ((0, 1),)
        assert sorted(l.kind for l in leaves(tree)) == ["V8", "V8"]

    def test_json_roundtrip(self):
        G = Graph(9, list(wagner_graph().edges) + [(0, 8)])
        tree = wagner_decompose(G)
        text = tree_to_json(tree)
        assert tree_from_json(json.loads(text)) == tree

    def test_edge_across_parts_rejected(self):
        left = Leaf((0, 1, 2), ((0, 1), (0, 2), (1, 2)), "planar")
        right = Leaf((0, 1, 3), ((0, 1), (0, 3), (1, 3), (2, 3)), "planar")
        with pytest.raises(ValueError):
            node_edges(Sum(left, right, (0, 1), ()))

    def test_random_constructions(self):
        rng = random.Random(7)
        for _ in range(150):
            G = random_k5_minor_free(rng, max_n=14)
            tree = wagner_decompose(G)
            assert recompose(tree, G.n) == G
            for leaf in leaves(tree):
                local = {v: i for i, v in enumerate(leaf.vertices)}
                H = Graph(len(local), [(local[a], local[b]) for a, b in leaf.edges])
                assert is_planar(H) or is_wagner_V8(H)
                assert leaf.kind == ("V8" if is_wagner_V8(H) else "planar")
            stack = [tree]
            while stack:
                node = stack.pop()
                if isinstance(node, Sum):
                    assert node.i <= 3
                    stack.extend((node.left, node.right))

    def test_decomposition_certifies_no_k5_minor(self):
        rng = random.Random(17)
        for _ in range(60):
            G = random_k5_minor_free(rng, max_n=9)
            wagner_decompose(G)
            assert not brute_has_minor(G.n, G.edges, 5, K5.edges)


class TestStructuredColouring:
    def _check(self, D, pre):
        c = structured_colouring(D, pre)
        cons = ColouringConstraints(k=2, pre=pre, forbid_mono_triangles=True)
        assert verify_colouring(D, c, cons)
        assert find_colouring(D, cons).found
        return c

    def test_two_k4_edge_pre(self):
        rng = random.Random(1)
        for _ in range(30):
            D = random_orientation(TWO_K4, rng)
            for pre in ({0: 1, 1: 2}, {0: 1, 1: 1}, {3: 2, 4: 1} if TWO_K4.has_edge(3, 4) else {2: 2, 4: 1}):
                self._check(D, pre)

    def test_v8_two_sum_triangulation(self):
        rng = random.Random(2)
        for seed in range(20):
            T = generate_stacked(7, seed=seed)
            u, v = T.graph.edges[0]
            G = glue_graphs(wagner_graph(), T.graph, {u: 0, v: 1})
            D = random_orientation(G, rng)
            a, b = G.edges[rng.randrange(len(G.edges))]
            self._check(D, {a: rng.randint(1, 2), b: rng.randint(1, 2)})

    def test_triangle_pre(self):
        rng = random.Random(3)
        D = random_orientation(TWO_K4, rng)
        self._check(D, {0: 1, 1: 2, 3: 2})

    def test_monochromatic_triangle_pre(self):
        D = random_orientation(TWO_K4, random.Random(0))
        with pytest.raises(MonochromaticTrianglePre):
            structured_colouring(D, {0: 1, 1: 1, 2: 1})

    def test_bad_domain(self):
        D = random_orientation(TWO_K4, random.Random(0))
        with pytest.raises(PreDomainNotEdgeOrTriangle):
            structured_colouring(D, {3: 1, 4: 2})
        with pytest.raises(PreDomainNotEdgeOrTriangle):
            structured_colouring(D, {0: 1})


class TestK33Search:
    def test_planar_corpus_candidates_are_two_colourable(self):
        tris, _ = load_corpus(max_n=8)
        rng = random.Random(0)
        for T in tris:
            for _ in range(5):
                D = random_orientation(T.graph, rng)
                assert find_colouring(D, ColouringConstraints(k=2)).found

    def test_every_k5_orientation_is_two_colourable(self):
        edges = K5.edges
        for idx in range(1 << len(edges)):
            D = Digraph(5, kernels.orientation_arcs(edges, idx))
            assert find_colouring(D, ColouringConstraints(k=2)).found

    def test_gadget_classes(self):
        gadgets = k5_edge_gadgets()
        pats = {g.patterns for g in gadgets}
        assert frozenset({(1, 1), (1, 2), (2, 1), (2, 2)}) in pats
        assert frozenset({(1, 2), (2, 1)}) in pats

    def test_hit_is_doubly_certified(self):
        hit = search_k33free_counterexample(budget=10 ** 6, seed=0)
        assert hit is not None
        D = hit.digraph
        assert enumerate_colourings(D, ColouringConstraints(k=2)) == []
        assert hit.dichromatic == 3
        assert has_minor(D.underlying(), K33) is None
        # structural route: 2-sums of parts too small to hold K3,3
        parts = [set(p) for p in hit.parts]
        assert set().union(*parts) == set(range(D.n))
        assert all(len(p) <= 5 for p in parts)
        G = D.underlying()
        for p, q in itertools.combinations(parts, 2):
            shared = p & q
            assert len(shared) <= 2
            if len(shared) == 2:
                assert G.has_edge(*sorted(shared))
        for u, v in G.edges:
            assert any(u in p and v in p for p in parts)

    def test_budget_exhaustion_is_none(self):
        assert search_k33free_counterexample(budget=1, seed=0) is None

    def test_seed_reproducible(self):
        a = search_k33free_counterexample(seed=5)
        b = search_k33free_counterexample(seed=5)
        assert a.to_json() == b.to_json()
