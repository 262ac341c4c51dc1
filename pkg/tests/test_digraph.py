import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from dichroma.digraph import (Digraph, Graph, canonical_form, complete_graph, directed_cycle,
                              format_pairs, glue, glue_vertex_map, is_acyclic, is_tournament_on,
                              octahedron_graph, parse_digraph, parse_graph, reverse_all,
                              reverse_arc, transitive_tournament, triangles, validate_digraph,
                              wagner_graph)
from dichroma.errors import (AntiParallelPair, ArcNotPresent, DuplicateArc, InvalidIdentification,
                             LoopArc, OrientationConflict, ParseError, SizeLimitExceeded,
                             VertexOutOfRange)

from oracles import brute_triangles, is_acyclic_set
from strategies import digraphs, graphs

TRANSITIVE = Digraph(3, [(0, 1), (0, 2), (1, 2)])
CYCLE = directed_cycle(3)


class TestValidate:
    def test_empty(self):
        D = validate_digraph(3, [])
        assert D.n == 3 and D.arcs == ()

    def test_antiparallel_rejected(self):
        with pytest.raises(AntiParallelPair):
            validate_digraph(2, [(0, 1), (1, 0)])

    def test_directed_triangle(self):
        assert validate_digraph(3, [(0, 1), (1, 2), (2, 0)]) == CYCLE

    @pytest.mark.parametrize("arcs, err", [
        ([(1, 1)], LoopArc),
        ([(0, 1), (0, 1)], DuplicateArc),
        ([(0, 3)], VertexOutOfRange),
        ([(-1, 0)], VertexOutOfRange),
    ])
    def test_invalid(self, arcs, err):
        with pytest.raises(err):
            validate_digraph(3, arcs)

    def test_constructor_rejects_antiparallel(self):
        with pytest.raises(AntiParallelPair):
            Digraph(2, [(0, 1), (1, 0)])


class TestAcyclic:
    def test_examples(self):
        assert not is_acyclic(CYCLE, [0, 1, 2])
        assert is_acyclic(TRANSITIVE, [0, 1, 2])
        assert is_acyclic(CYCLE, [0, 1])
        assert is_acyclic(CYCLE, [])

    def test_out_of_range(self):
        with pytest.raises(VertexOutOfRange):
            is_acyclic(CYCLE, [5])

    @settings(max_examples=300, deadline=None)
    @given(digraphs(max_n=7), st.data())
    def test_matches_networkx(self, D, data):
        X = data.draw(st.sets(st.integers(0, D.n - 1)))
        assert is_acyclic(D, X) == is_acyclic_set(D.arcs, X)

    @settings(max_examples=200, deadline=None)
    @given(digraphs(max_n=7), st.data())
    def test_reversal_symmetry(self, D, data):
        X = data.draw(st.sets(st.integers(0, D.n - 1)))
        assert is_acyclic(reverse_all(D), X) == is_acyclic(D, X)


class TestReverse:
    def test_reverse_all_examples(self):
        assert reverse_all(CYCLE) == Digraph(3, [(1, 0), (2, 1), (0, 2)])
        R = reverse_all(TRANSITIVE)
        assert R.in_rows[0] == 0b110 and R.out_rows[0] == 0
        assert reverse_all(Digraph(0, [])) == Digraph(0, [])

    @given(digraphs())
    def test_reverse_all_involution(self, D):
        assert reverse_all(reverse_all(D)) == D

    def test_reverse_arc(self):
        T = reverse_arc(CYCLE, (2, 0))
        assert is_acyclic(T)
        assert T.has_arc(0, 2) and T.has_arc(0, 1) and T.has_arc(1, 2)
        assert reverse_arc(T, (0, 2)) == CYCLE
        assert reverse_arc(Digraph(2, [(0, 1)]), (0, 1)) == Digraph(2, [(1, 0)])

    def test_reverse_missing_arc(self):
        with pytest.raises(ArcNotPresent):
            reverse_arc(CYCLE, (0, 2))


class TestGlue:
    def test_two_transitive_triangles_on_an_arc(self):
        D = glue(TRANSITIVE, TRANSITIVE, {0: 0, 1: 1})
        assert D.n == 4 and len(D.arcs) == 5

    def test_disjoint_union(self):
        D = glue(CYCLE, TRANSITIVE, {})
        assert D.n == 6 and len(D.arcs) == 6
        assert D.induced([3, 4, 5]) == TRANSITIVE

    def test_orientation_conflict(self):
        # transitive arc 0->2 against cyclic arc 2->0
        with pytest.raises(OrientationConflict):
            glue(TRANSITIVE, CYCLE, {0: 0, 2: 2})

    def test_bad_identification(self):
        with pytest.raises(InvalidIdentification):
            glue(CYCLE, CYCLE, {0: 1, 1: 1})
        with pytest.raises(InvalidIdentification):
            glue(CYCLE, CYCLE, {0: 7})

    @settings(max_examples=150, deadline=None)
    @given(digraphs(max_n=6), digraphs(max_n=6), st.data())
    def test_restriction_recovers_parts(self, D1, D2, data):
        s = data.draw(st.integers(0, 1))
        if s == 1:
            ident = {data.draw(st.integers(0, D2.n - 1)): data.draw(st.integers(0, D1.n - 1))}
        else:
            ident = {}
        D = glue(D1, D2, ident)
        assert D.n == D1.n + D2.n - len(ident)
        assert D.induced(range(D1.n)) == D1
        vmap = glue_vertex_map(D1.n, D2.n, ident)
        assert D.induced(vmap) == D2


class TestTriangles:
    def test_examples(self):
        assert len(triangles(complete_graph(4))) == 4
        assert triangles(wagner_graph()) == []
        assert len(triangles(octahedron_graph())) == 8

    @settings(max_examples=200, deadline=None)
    @given(graphs(max_n=12))
    def test_matches_brute_force(self, G):
        assert triangles(G) == brute_triangles(G.n, G.edges)


class TestTournament:
    def test_examples(self):
        assert is_tournament_on(CYCLE, [0, 1, 2])
        assert is_tournament_on(Digraph(4, []), [2])
        assert is_tournament_on(Digraph(4, []), [])
        D = Digraph(4, [(u, v) for u, v in itertools.combinations(range(4), 2) if (u, v) != (1, 3)])
        assert not is_tournament_on(D, range(4))


class TestCanonicalForm:
    def test_relabelled_cycle(self):
        for perm in itertools.permutations(range(3)):
            assert canonical_form(CYCLE.relabel(perm)) == canonical_form(CYCLE)

    def test_cycle_vs_transitive(self):
        assert canonical_form(CYCLE) != canonical_form(TRANSITIVE)

    def test_graph_and_digraph_never_collide(self):
        assert canonical_form(Graph(2, [(0, 1)])) != canonical_form(Digraph(2, [(0, 1)]))

    def test_size_limit(self):
        with pytest.raises(SizeLimitExceeded):
            canonical_form(transitive_tournament(11))

    def test_invariant_under_1000_random_permutations(self):
        rng = random.Random(20261015)
        for _ in range(1000):
            n = rng.randint(1, 10)
            D = Digraph(n, [(u, v) if rng.random() < 0.5 else (v, u)
                            for u, v in itertools.combinations(range(n), 2) if rng.random() < 0.6])
            perm = list(range(n))
            rng.shuffle(perm)
            assert canonical_form(D.relabel(perm)) == canonical_form(D)

    @settings(max_examples=200, deadline=None)
    @given(digraphs(max_n=6), digraphs(max_n=6))
    def test_equal_iff_isomorphic(self, D1, D2):
        import networkx as nx
        g1, g2 = nx.DiGraph(), nx.DiGraph()
        g1.add_nodes_from(range(D1.n))
        g1.add_edges_from(D1.arcs)
        g2.add_nodes_from(range(D2.n))
        g2.add_edges_from(D2.arcs)
        assert (canonical_form(D1) == canonical_form(D2)) == nx.is_isomorphic(g1, g2)


class TestTextFormat:
    def test_roundtrip(self):
        D = transitive_tournament(4)
        assert parse_digraph(format_pairs(D, comment="tt4")) == D
        G = wagner_graph()
        assert parse_graph(format_pairs(G)) == G

    def test_comments_and_blank_lines(self):
        text = "# a cycle\n\n3 3\n0 1  # first\n1 2\n2 0\n"
        assert parse_digraph(text) == CYCLE

    @pytest.mark.parametrize("text, line", [
        ("x y\n", 1),
        ("3 2\n0 1\n", 1),
        ("3 1\n0 9\n", 2),
        ("3 2\n0 1\n1 a\n", 3),
    ])
    def test_parse_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ParseError) as exc:
            parse_digraph(text)
        assert exc.value.lineno == line

    def test_antiparallel_in_file(self):
        with pytest.raises(AntiParallelPair):
            parse_digraph("2 2\n0 1\n1 0\n")
