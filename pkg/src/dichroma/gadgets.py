"""Executable constructions for 2-colouring oriented planar triangulations.

* the blocking octahedron: an octahedron orientation whose outer triangle is
  never monochromatic in an acyclic 2-colouring;
* ``build_T_delta``: a blocking octahedron glued into every transitive face;
* ``build_T_star``: three copies of a triangulation glued into a K4 frame
  whose centre is a source and whose outer triangle is a directed cycle;
* pre-colour extension tables derived from colourings of T*, with the
  single-arc reversal for directed triangles;
* extension of a triangle pre-colouring by recursion on separating triangles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from . import kernels
from .colouring import (ColouringConstraints, enumerate_colourings,
                        find_colouring, merge_colourings, verify_colouring)
from .digraph import (Digraph, glue, glue_vertex_map,
                      parse_digraph, reverse_all, reverse_arc, format_pairs)
from .errors import (MonochromaticPre, NoGadgetFound, NotFacial, NotTransitive,
                     OracleFailure)
from .planar import (EmbeddedTriangulation, OrientedTriangulation,
                     glue_into_face, octahedron_embedding, separating_triangles,
                     split_at_triangle, tetrahedron)

GADGET_FIXTURE = "o6.txt"

# the six non-monochromatic {1,2}-patterns on a sorted triangle
NON_MONO_PATTERNS = tuple(p for p in itertools.product((1, 2), repeat=3) if len(set(p)) > 1)


def flip(c):
    return tuple(3 - x for x in c)


def transitive_labelling(D: Digraph, tri):
    """(source, middle, sink) of a transitively oriented triangle, else None."""
    for a1, a2, a3 in itertools.permutations(tri):
        if D.has_arc(a1, a2) and D.has_arc(a1, a3) and D.has_arc(a2, a3):
            return a1, a2, a3
    return None


def cyclic_labelling(D: Digraph, tri):
    """(a1, a2, a3) with arcs a1->a2->a3->a1 starting at the smallest vertex, else None."""
    a = min(tri)
    for b, c in itertools.permutations([v for v in tri if v != a]):
        if D.has_arc(a, b) and D.has_arc(b, c) and D.has_arc(c, a):
            return a, b, c
    return None


# blocking octahedron ---------------------------------------------------------------

@dataclass(frozen=True)
class BlockingGadget:
    orientation: Digraph
    outer: tuple
    embedding: EmbeddedTriangulation = field(default_factory=octahedron_embedding, compare=False)

    def to_text(self):
        body = format_pairs(self.orientation, comment="blocking octahedron orientation")
        return body + "outer: {} {} {}\n".format(*self.outer)

    @classmethod
    def from_text(cls, text):
        lines = text.splitlines()
        outer_lines = [ln for ln in lines if ln.startswith("outer:")]
        if len(outer_lines) != 1:
            raise ValueError("gadget fixture needs exactly one 'outer:' line")
        outer = tuple(int(x) for x in outer_lines[0].split(":", 1)[1].split())
        D = parse_digraph("\n".join(ln for ln in lines if not ln.startswith("outer:")))
        return cls(D, outer)


def is_blocking(D: Digraph, outer) -> bool:
    """No acyclic 2-colouring of D is monochromatic on ``outer``."""
    for colour in (1, 2):
        cons = ColouringConstraints(k=2, pre={v: colour for v in outer})
        if find_colouring(D, cons).found:
            return False
    return True


def find_blocking_octahedron() -> BlockingGadget:
    """First octahedron orientation (edge-index order) with a transitive,
    never-monochromatic outer face and at least one acyclic 2-colouring."""
    emb = octahedron_embedding()
    outer = tuple(sorted(emb.outer_face))
    edges = emb.graph.edges
    for idx in range(1 << len(edges)):
        D = Digraph(emb.n, kernels.orientation_arcs(edges, idx))
        if transitive_labelling(D, outer) is None:
            continue
        colourings = enumerate_colourings(D, ColouringConstraints(k=2))
        if not colourings:
            continue
        if all(len({c[v] for v in outer}) > 1 for c in colourings):
            return BlockingGadget(D, outer, emb)
    raise NoGadgetFound("no octahedron orientation blocks a monochromatic outer face")


@lru_cache(maxsize=1)
def load_gadget() -> BlockingGadget:
    """The pinned gadget from the package fixture."""
    text = resources.files("dichroma").joinpath("data", GADGET_FIXTURE).read_text()
    g = BlockingGadget.from_text(text)
    if not is_blocking(g.orientation, g.outer):
        raise NoGadgetFound("pinned gadget fails the blocking property")
    return g


# T-delta ---------------------------------------------------------------------------

def build_T_delta(OT: OrientedTriangulation, gadget: BlockingGadget = None) -> OrientedTriangulation:
    """Glue a gadget copy into every transitively oriented face of OT.

    For each face the gadget's outer corners are matched to the face corners
    by the first of the six corner permutations (lexicographic) under which
    all three arcs agree; ``glue_into_face`` mirrors the copy when needed.
    """
    gadget = gadget or load_gadget()
    E, D = OT.embedding, OT.orientation
    G = gadget.orientation
    g_outer = gadget.outer
    for face in sorted(tuple(sorted(f)) for f in OT.embedding.faces):
        if transitive_labelling(OT.orientation, face) is None:
            continue
        for perm in itertools.permutations(face):
            ok = all(G.has_arc(g_outer[i], g_outer[j]) == OT.orientation.has_arc(perm[i], perm[j])
                     for i, j in itertools.permutations(range(3), 2))
            if ok:
                break
        else:  # pragma: no cover - a transitive triangle always matches one permutation
            raise NotTransitive(f"no gadget symmetry fits face {face}")
        ident = {g_outer[i]: perm[i] for i in range(3)}
        E = glue_into_face(E, gadget.embedding, ident)
        D = glue(D, G, ident)
    return OrientedTriangulation(E, D)


def tdelta_restriction_violations(OT: OrientedTriangulation, TD: OrientedTriangulation,
                                  which="facial") -> list:
    """Triangles of OT that some acyclic 2-colouring of TD leaves monochromatic.

    Colour swapping preserves acyclic colourings, so asking for colour 1 on
    the triangle suffices.  ``which`` is "facial" or "all".
    """
    if which == "facial":
        tris = OT.embedding.facial_triangles()
    else:
        from .digraph import triangles
        tris = triangles(OT.embedding.graph)
    bad = []
    for t in tris:
        if find_colouring(TD.orientation, ColouringConstraints(k=2, pre={v: 1 for v in t})).found:
            bad.append(t)
    return bad


# T-star ------------------------------------------------------------------------------

@dataclass(frozen=True)
class TStar:
    triangulation: OrientedTriangulation
    centre: int
    outer: tuple                 # o1, o2, o3 with arcs o1->o2->o3->o1
    copy_maps: tuple             # copy i: vertex of T -> vertex of T*
    copy_edges: tuple            # copy i sits on outer arc copy_edges[i]

    def frame_arcs(self):
        x = self.centre
        o = self.outer
        return [(x, o[0]), (x, o[1]), (x, o[2]), (o[0], o[1]), (o[1], o[2]), (o[2], o[0])]


@lru_cache(maxsize=1)
def _frame():
    # tetrahedron() stacks vertex 3 into face (0, 1, 2); rename it to be the centre 0
    perm = [1, 2, 3, 0]
    E = tetrahedron().relabel(perm, outer_face=(1, 2, 3))
    D = Digraph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 1)])
    return E, D


def build_T_star(OT: OrientedTriangulation, labelling) -> TStar:
    """Three copies of OT in the inner faces of the K4 frame.

    ``labelling`` = (a1, a2, a3) must be a face with arcs a1->a2, a1->a3,
    a2->a3.  Copy i identifies a1 with the centre and a2 -> a3 with the
    outer arc o_i -> o_{i+1}.
    """
    a1, a2, a3 = labelling
    D = OT.orientation
    if OT.embedding.find_face(labelling) is None:
        raise NotFacial(f"{labelling} is not a face")
    if not (D.has_arc(a1, a2) and D.has_arc(a1, a3) and D.has_arc(a2, a3)):
        raise NotTransitive(f"{labelling} is not labelled source, middle, sink")
    E, S = _frame()
    x, outer = 0, (1, 2, 3)
    maps, copy_edges = [], []
    for i in range(3):
        u, v = outer[i], outer[(i + 1) % 3]
        ident = {a1: x, a2: u, a3: v}
        maps.append(tuple(glue_vertex_map(S.n, OT.n, ident)))
        copy_edges.append((u, v))
        E = glue_into_face(E, OT.embedding, ident)
        S = glue(S, D, ident)
    return TStar(OrientedTriangulation(E.with_outer(outer), S), x, outer,
                 tuple(maps), tuple(copy_edges))


# extension tables ----------------------------------------------------------------------

def facial_constraints(OT: OrientedTriangulation, pre=None) -> ColouringConstraints:
    return ColouringConstraints(k=2, pre=dict(pre or {}),
                                triangles=OT.embedding.facial_triangles())


def _solve_facial(OT: OrientedTriangulation):
    res = find_colouring(OT.orientation, facial_constraints(OT))
    if not res.found:
        raise OracleFailure(f"oriented triangulation on {OT.n} vertices has no acyclic "
                            "2-colouring without monochromatic faces")
    return res.colouring


def case_one(OT: OrientedTriangulation, labelling):
    """c1 and c2 from a facial-triangle colouring of T*.

    With c*(x) = 1, the directed outer triangle has an arc coloured 1 -> 2
    and an arc coloured 2 -> 1.  The copies on those arcs give colourings
    of OT with (a1, a2, a3) coloured (1, 1, 2) and (1, 2, 1).
    """
    ts = build_T_star(OT, labelling)
    cstar = _solve_facial(ts.triangulation)
    if cstar[ts.centre] == 2:
        cstar = flip(cstar)
    c1 = c2 = None
    for (u, v), vmap in zip(ts.copy_edges, ts.copy_maps):
        restricted = tuple(cstar[vmap[w]] for w in range(OT.n))
        if cstar[u] == 1 and cstar[v] == 2 and c1 is None:
            c1 = restricted
        elif cstar[u] == 2 and cstar[v] == 1 and c2 is None:
            c2 = restricted
    if c1 is None or c2 is None:
        raise OracleFailure("outer triangle of T* is monochromatic")
    a1, a2, a3 = labelling
    assert (c1[a1], c1[a2], c1[a3]) == (1, 1, 2)
    assert (c2[a1], c2[a2], c2[a3]) == (1, 2, 1)
    return c1, c2, ts


def _reverse(OT):
    return OrientedTriangulation(OT.embedding, reverse_all(OT.orientation))


def _with_orientation(OT, D):
    return OrientedTriangulation(OT.embedding, D)


def _check_face(OT, t):
    t = tuple(sorted(t))
    if OT.embedding.find_face(t) is None:
        raise NotFacial(f"{t} is not a face")
    return t


def extend_facial(OT: OrientedTriangulation, t, pattern):
    """One colouring of OT without monochromatic faces extending ``pattern`` on face ``t``.

    ``pattern`` gives colours for the sorted corners of ``t``.  Returns
    ``(colouring, route)`` where route names the derivation used.
    """
    t = _check_face(OT, t)
    pattern = tuple(pattern)
    if len(set(pattern)) == 1:
        raise MonochromaticPre("pre-colouring of the triangle is monochromatic")
    want = dict(zip(t, pattern))
    # normalise so exactly one corner has colour 2
    flipped = sum(1 for c in pattern if c == 2) == 2
    if flipped:
        want = {v: 3 - c for v, c in want.items()}
    odd = next(v for v, c in want.items() if c == 2)
    D = OT.orientation
    lab = transitive_labelling(D, t)
    if lab is not None:
        a1, a2, a3 = lab
        if odd == a3:
            col, _, _ = case_one(OT, lab)
            route = "c1"
        elif odd == a2:
            _, col, _ = case_one(OT, lab)
            route = "c2"
        else:
            col, _, _ = case_one(_reverse(OT), (a3, a2, a1))
            route = "c1'"
    else:
        col, route = _case_two(OT, t, odd)
    if flipped:
        col = flip(col)
        route += "+flip"
    return col, route


def _case_two(OT, t, odd):
    """Directed face: reverse the arc from ``odd`` to its successor and use ``case_one``."""
    b1, b2, b3 = cyclic_labelling(OT.orientation, t)
    rot = [b1, b2, b3]
    while rot[2] != odd:
        rot = rot[1:] + rot[:1]
    a1, a2, a3 = rot                      # a1 -> a2 -> a3 -> a1, a3 the odd corner
    Te = _with_orientation(OT, reverse_arc(OT.orientation, (a3, a1)))
    col, _, _ = case_one(Te, (a1, a2, a3))
    # a colouring of T_e separating a3 from a1 keeps every class of T intact
    assert col[a3] != col[a1]
    assert verify_colouring(OT.orientation, col, facial_constraints(OT))
    return col, "case2"


@dataclass(frozen=True)
class PreColourExtensionTable:
    triangle: tuple
    entries: dict         # pattern on sorted triangle -> colouring
    routes: dict          # pattern -> derivation label

    def __len__(self):
        return len(self.entries)


def derive_precolour_extensions(OT: OrientedTriangulation, t) -> PreColourExtensionTable:
    """Extending colourings for all six non-monochromatic pre-colourings of face ``t``."""
    t = _check_face(OT, t)
    D = OT.orientation
    entries, routes = {}, {}

    def add(col, route):
        pattern = tuple(col[v] for v in t)
        entries.setdefault(pattern, col)
        routes.setdefault(pattern, route)
        f = flip(col)
        pattern = tuple(f[v] for v in t)
        entries.setdefault(pattern, f)
        routes.setdefault(pattern, route + "+flip")

    lab = transitive_labelling(D, t)
    if lab is not None:
        a1, a2, a3 = lab
        c1, c2, _ = case_one(OT, lab)
        c1r, c2r, _ = case_one(_reverse(OT), (a3, a2, a1))
        for col, name in ((c1, "c1"), (c2, "c2"), (c1r, "c1'"), (c2r, "c2'")):
            add(col, name)
    else:
        for odd in t:
            col, route = _case_two(OT, t, odd)
            add(col, route)
    for pattern, col in entries.items():
        cons = facial_constraints(OT, dict(zip(t, pattern)))
        if not verify_colouring(D, col, cons):
            raise OracleFailure(f"derived colouring for pattern {pattern} does not verify")
    if set(entries) != set(NON_MONO_PATTERNS):
        raise OracleFailure(f"extension table covers only {sorted(entries)}")
    return PreColourExtensionTable(t, entries, routes)


# separating-triangle recursion ------------------------------------------------------

@dataclass
class RecursionStats:
    calls: int = 0
    max_depth: int = 0
    facial_solves: int = 0


def _choose_separator(OT, seps):
    best = None
    for s in seps:
        split = split_at_triangle(OT, s)
        key = (max(len(split.inside_vertices), len(split.outside_vertices)), s)
        if best is None or key < best[0]:
            best = (key, split)
    return best[1]


def extend_via_separating_triangles(OT: OrientedTriangulation, t, pre, stats=None):
    """Acyclic 2-colouring with no monochromatic triangle extending ``pre`` on triangle ``t``.

    ``pre`` maps the three corners of ``t`` to colours and may not be
    monochromatic.
    """
    t = tuple(sorted(t))
    if set(pre) != set(t):
        raise ValueError("pre-colouring must be defined exactly on the triangle")
    if len(set(pre.values())) == 1:
        raise MonochromaticPre("pre-colouring of the triangle is monochromatic")
    stats = stats if stats is not None else RecursionStats()
    col = _extend(OT, t, dict(pre), stats, 1)
    cons = ColouringConstraints(k=2, pre=pre, forbid_mono_triangles=True)
    if not verify_colouring(OT.orientation, col, cons):
        raise OracleFailure("recursive extension produced an invalid colouring")
    return col


def _extend(OT, t, pre, stats, depth):
    stats.calls += 1
    stats.max_depth = max(stats.max_depth, depth)
    if OT.n == 3:
        return tuple(pre[v] for v in range(3))
    seps = separating_triangles(OT.embedding)
    if not seps:
        stats.facial_solves += 1
        col, _ = extend_facial(OT, t, tuple(pre[v] for v in t))
        return col
    split = _choose_separator(OT, seps)
    sides = [(split.outside, split.outside_vertices), (split.inside, split.inside_vertices)]
    if not set(t) <= set(split.outside_vertices):
        sides.reverse()
    (first, first_vs), (other, other_vs) = sides
    loc1 = {v: i for i, v in enumerate(first_vs)}
    loc2 = {v: i for i, v in enumerate(other_vs)}
    c_first = _extend(first, tuple(sorted(loc1[v] for v in t)),
                      {loc1[v]: c for v, c in pre.items()}, stats, depth + 1)
    s = split.triangle
    # the separating triangle is a triangle of the first side, so it is not monochromatic
    pre2 = {loc2[v]: c_first[loc1[v]] for v in s}
    c_other = _extend(other, tuple(sorted(pre2)), pre2, stats, depth + 1)
    ident = {loc2[v]: loc1[v] for v in s}
    merged = merge_colourings(first.orientation, c_first, other.orientation, c_other, ident)
    vmap = glue_vertex_map(first.n, other.n, ident)
    col = [0] * OT.n
    for i, v in enumerate(first_vs):
        col[v] = merged[i]
    for j, v in enumerate(other_vs):
        col[v] = merged[vmap[j]]
    return tuple(col)
