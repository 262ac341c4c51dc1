import itertools
import random
from importlib import resources

import pytest
from hypothesis import given, settings, strategies as st

from dichroma.colouring import ColouringConstraints, enumerate_colourings, verify_colouring
from dichroma.digraph import Digraph, directed_cycle, reverse_arc, transitive_tournament
from dichroma.errors import MonochromaticPre, NotFacial, NotTransitive
from dichroma.gadgets import (NON_MONO_PATTERNS, BlockingGadget, RecursionStats, build_T_delta,
                              build_T_star, case_one, cyclic_labelling,
                              derive_precolour_extensions, extend_facial,
                              extend_via_separating_triangles, find_blocking_octahedron,
                              is_blocking, load_gadget, tdelta_restriction_violations,
                              transitive_labelling)
from dichroma.planar import (OrientedTriangulation, generate_stacked, generate_triangulations,
                             octahedron_embedding, separating_triangles, tetrahedron)
from dichroma.digraph import triangles
from dichroma import kernels

from oracles import brute_colourings


def oriented(T, idx):
    return OrientedTriangulation(T, Digraph(T.n, kernels.orientation_arcs(T.graph.edges, idx)))


def transitive_k4():
    T = tetrahedron()
    return OrientedTriangulation(T, transitive_tournament(4))


def all_faces_directed_octahedron():
    # the faces 2-colour, so each face can run clockwise or anticlockwise by colour
    E = octahedron_embedding()
    for idx in range(1 << 12):
        OT = oriented(E, idx)
        if all(cyclic_labelling(OT.orientation, f) for f in E.facial_triangles()):
            return OT
    raise AssertionError("no octahedron orientation with only directed faces")


class TestBlockingOctahedron:
    def test_search_matches_fixture(self):
        g = find_blocking_octahedron()
        assert g == load_gadget()
        text = resources.files("dichroma").joinpath("data", "o6.txt").read_text()
        assert BlockingGadget.from_text(text) == g
        assert BlockingGadget.from_text(g.to_text()) == g

    def test_exhaustive_over_all_64_colourings(self):
        g = load_gadget()
        D = g.orientation
        valid = brute_colourings(6, D.arcs, 2)
        assert valid
        for c in itertools.product((1, 2), repeat=6):
            mono = len({c[v] for v in g.outer}) == 1
            if mono:
                assert c not in valid

    def test_mono_outer_colouring_fails_verification(self):
        g = load_gadget()
        c = [2] * 6
        for v in g.outer:
            c[v] = 1
        assert not verify_colouring(g.orientation, tuple(c), ColouringConstraints(k=2))

    def test_outer_is_transitive_face(self):
        g = load_gadget()
        assert g.embedding.find_face(g.outer) is not None
        assert transitive_labelling(g.orientation, g.outer) is not None

    def test_is_blocking_rejects_plain_orientation(self):
        E = octahedron_embedding()
        assert not is_blocking(Digraph(6, E.graph.edges), E.outer_face)


class TestTDelta:
    def test_transitive_k4(self):
        OT = transitive_k4()
        TD = build_T_delta(OT)
        assert TD.n == 16
        assert len(TD.embedding.graph.edges) == 3 * 16 - 6
        assert TD.orientation.induced(range(4)) == OT.orientation

    def test_all_cyclic_faces_unchanged(self):
        OT = all_faces_directed_octahedron()
        TD = build_T_delta(OT)
        assert TD.orientation == OT.orientation and TD.n == OT.n

    def test_facial_triangles_never_monochromatic(self):
        for T in [t for n in range(4, 7) for t in generate_triangulations(n)]:
            rng = random.Random(T.n)
            for _ in range(8):
                OT = oriented(T, rng.getrandbits(len(T.graph.edges)))
                TD = build_T_delta(OT)
                assert tdelta_restriction_violations(OT, TD, "facial") == []

    def test_brute_force_on_k4(self):
        # every acyclic 2-colouring of T-delta keeps every triangle of K4 bichromatic
        OT = transitive_k4()
        TD = build_T_delta(OT)
        cols = enumerate_colourings(TD.orientation, ColouringConstraints(k=2))
        assert cols
        for c in cols:
            for t in triangles(OT.embedding.graph):
                assert len({c[v] for v in t}) > 1

    def test_separating_triangle_can_be_monochromatic(self):
        # a transitive separating triangle gets no gadget of its own
        arcs = [(0, 2), (0, 3), (1, 0), (1, 2), (2, 3), (2, 4), (3, 1), (3, 4), (4, 0)]
        T = generate_stacked(5)
        assert set(T.graph.edges) == {tuple(sorted(a)) for a in arcs}
        OT = OrientedTriangulation(T, Digraph(5, arcs))
        TD = build_T_delta(OT)
        assert TD.n == 11
        assert tdelta_restriction_violations(OT, TD, "all") == [(0, 2, 3)]
        assert (0, 2, 3) in separating_triangles(T)


class TestTStar:
    def test_transitive_k4(self):
        OT = transitive_k4()
        face = (0, 1, 2)
        ts = build_T_star(OT, transitive_labelling(OT.orientation, face))
        S = ts.triangulation.orientation
        assert ts.triangulation.n == 3 * OT.n - 5
        assert S.in_rows[ts.centre] & sum(1 << o for o in ts.outer) == 0
        o = ts.outer
        assert all(S.has_arc(o[i], o[(i + 1) % 3]) for i in range(3))
        assert tuple(sorted(ts.triangulation.embedding.outer())) == tuple(sorted(o))

    def test_copies_are_faithful(self):
        OT = transitive_k4()
        ts = build_T_star(OT, (0, 1, 2))
        S = ts.triangulation.orientation
        for vmap in ts.copy_maps:
            assert S.induced(vmap) == OT.orientation

    def test_rejects_bad_labelling(self):
        OT = transitive_k4()
        with pytest.raises(NotTransitive):
            build_T_star(OT, (2, 1, 0))
        from dichroma.planar import insert_vertex
        T5 = insert_vertex(tetrahedron(), (0, 1, 2))
        OT5 = OrientedTriangulation(T5, Digraph(5, T5.graph.edges))
        with pytest.raises(NotFacial):
            build_T_star(OT5, (0, 1, 2))


class TestExtensionTables:
    def test_transitive_k4_every_face(self):
        OT = transitive_k4()
        for f in OT.embedding.facial_triangles():
            table = derive_precolour_extensions(OT, f)
            assert set(table.entries) == set(NON_MONO_PATTERNS) and len(table) == 6
            for pattern, col in table.entries.items():
                assert tuple(col[v] for v in f) == pattern
                assert verify_colouring(OT.orientation, col, ColouringConstraints(
                    k=2, pre=dict(zip(f, pattern)), triangles=OT.embedding.facial_triangles()))

    def test_case_one_patterns(self):
        OT = transitive_k4()
        a1, a2, a3 = transitive_labelling(OT.orientation, (0, 1, 2))
        c1, c2, _ = case_one(OT, (a1, a2, a3))
        assert (c1[a1], c1[a2], c1[a3]) == (1, 1, 2)
        assert (c2[a1], c2[a2], c2[a3]) == (1, 2, 1)
        from dichroma.gadgets import _reverse
        c1r, _, _ = case_one(_reverse(OT), (a3, a2, a1))
        assert (c1r[a1], c1r[a2], c1r[a3]) == (2, 1, 1)

    def test_directed_face_uses_case_two(self):
        T = tetrahedron()
        for idx in range(64):
            OT = oriented(T, idx)
            for f in T.facial_triangles():
                if cyclic_labelling(OT.orientation, f) is None:
                    continue
                table = derive_precolour_extensions(OT, f)
                assert len(table) == 6
                assert {r.split("+")[0] for r in table.routes.values()} == {"case2"}

    def test_case_two_reduction_on_reversed_arc(self):
        # colouring of T_e separating the reversed arc's ends is valid for T
        T = tetrahedron()
        for idx in range(64):
            OT = oriented(T, idx)
            for f in T.facial_triangles():
                lab = cyclic_labelling(OT.orientation, f)
                if lab is None:
                    continue
                a1, a2, a3 = lab
                De = reverse_arc(OT.orientation, (a3, a1))
                for c in enumerate_colourings(De, ColouringConstraints(k=2)):
                    if c[a3] != c[a1]:
                        assert verify_colouring(OT.orientation, c, ColouringConstraints(k=2))

    def test_extend_facial_monochromatic(self):
        with pytest.raises(MonochromaticPre):
            extend_facial(transitive_k4(), (0, 1, 2), (1, 1, 1))

    def test_non_facial_rejected(self):
        T = generate_stacked(5)
        OT = oriented(T, 0)
        (s,) = separating_triangles(T)
        with pytest.raises(NotFacial):
            derive_precolour_extensions(OT, s)

    def test_sampled_orientations_up_to_eight(self):
        rng = random.Random(8)
        for n in range(4, 9):
            for T in generate_triangulations(n):
                OT = oriented(T, rng.getrandbits(len(T.graph.edges)))
                f = rng.choice(T.facial_triangles())
                assert len(derive_precolour_extensions(OT, f)) == 6


class TestSeparatingRecursion:
    def test_base_case_returns_pre(self):
        from dichroma.planar import triangle_embedding
        OT = OrientedTriangulation(triangle_embedding(), directed_cycle(3))
        assert extend_via_separating_triangles(OT, (0, 1, 2), {0: 1, 1: 2, 2: 2}) == (1, 2, 2)

    def test_monochromatic_pre(self):
        with pytest.raises(MonochromaticPre):
            extend_via_separating_triangles(transitive_k4(), (0, 1, 2), {0: 2, 1: 2, 2: 2})

    @settings(max_examples=60, deadline=None)
    @given(st.integers(4, 10), st.integers(0, 10 ** 6), st.data())
    def test_stacked_family(self, n, seed, data):
        T = generate_stacked(n, seed=seed)
        rng = random.Random(seed)
        OT = oriented(T, rng.getrandbits(len(T.graph.edges)))
        t = data.draw(st.sampled_from(triangles(T.graph)))
        pattern = data.draw(st.sampled_from(NON_MONO_PATTERNS))
        pre = dict(zip(t, pattern))
        stats = RecursionStats()
        c = extend_via_separating_triangles(OT, t, pre, stats)
        assert verify_colouring(OT.orientation, c, ColouringConstraints(
            k=2, pre=pre, forbid_mono_triangles=True))
        assert stats.max_depth <= len(separating_triangles(T)) + 1

    def test_every_triangle_of_sampled_orientations(self):
        rng = random.Random(4)
        for n in range(4, 9):
            for T in generate_triangulations(n):
                OT = oriented(T, rng.getrandbits(len(T.graph.edges)))
                for t in triangles(T.graph):
                    for pattern in NON_MONO_PATTERNS:
                        extend_via_separating_triangles(OT, t, dict(zip(t, pattern)))
