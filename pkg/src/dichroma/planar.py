"""Planar triangulations as rotation systems.

A rotation system lists, for every vertex, its neighbours in cyclic order.
Faces are traced with the rule: the dart following ``u -> v`` is
``v -> w`` where ``w`` comes right after ``u`` in the rotation at ``v``.
Every face is stored as the tuple of vertices along its dart cycle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from . import kernels
from .digraph import (CANON_MAX_N, Digraph, Graph, canonical_form,
                      glue_vertex_map, triangles)
from .errors import (BadHeader, BudgetExceeded, InconsistentRotation,
                     NotATriangulation, NotPlanarEmbedding, NotSeparating,
                     TruncatedStream)

PLANAR_CODE_HEADER = b">>planar_code<<"
MAX_ORIENTATION_EDGES = 24


def _succ_maps(rotation):
    succ = []
    for rot in rotation:
        succ.append({rot[i]: rot[(i + 1) % len(rot)] for i in range(len(rot))})
    return succ


def faces_from_rotation(G: Graph, rotation) -> list:
    """Trace all faces; raises if the rotation does not embed G in the sphere."""
    if len(rotation) != G.n:
        raise InconsistentRotation("rotation system has wrong number of vertices")
    for v in range(G.n):
        rot = rotation[v]
        if len(set(rot)) != len(rot) or set(rot) != set(G.neighbours(v)):
            raise InconsistentRotation(f"rotation at {v} does not list exactly its neighbours")
    succ = _succ_maps(rotation)
    seen = set()
    faces = []
    for u, v in G.edges:
        for dart in ((u, v), (v, u)):
            if dart in seen:
                continue
            face = []
            a, b = dart
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                a, b = b, succ[b][a]
            faces.append(tuple(face))
    components = _component_count(G)
    if G.n - len(G.edges) + len(faces) != 1 + components:
        raise NotPlanarEmbedding(
            f"Euler relation fails: n={G.n}, e={len(G.edges)}, f={len(faces)}")
    return faces


def _component_count(G):
    seen = 0
    count = 0
    for s in range(G.n):
        if (seen >> s) & 1:
            continue
        count += 1
        frontier = 1 << s
        seen |= frontier
        while frontier:
            nxt = 0
            x = frontier
            while x:
                b = x & -x
                nxt |= G.adj[b.bit_length() - 1]
                x ^= b
            frontier = nxt & ~seen
            seen |= frontier
    return count


def _rotate_to(face, start):
    i = face.index(start)
    return face[i:] + face[:i]


def _same_cycle(f1, f2):
    return len(f1) == len(f2) and f2[0] in f1 and _rotate_to(tuple(f1), f2[0]) == tuple(f2)


@dataclass(frozen=True)
class EmbeddedTriangulation:
    """Maximal planar graph with its rotation system.

    ``outer_face`` is a vertex triple naming a face; when None the first
    traced face is the outer one.
    """

    graph: Graph
    rotation: tuple
    outer_face: Optional[tuple] = None
    faces: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rotation = tuple(tuple(r) for r in self.rotation)
        object.__setattr__(self, "rotation", rotation)
        n, m = self.graph.n, len(self.graph.edges)
        if n < 3 or m != 3 * n - 6:
            raise NotATriangulation(f"{n} vertices and {m} edges is not a triangulation")
        faces = faces_from_rotation(self.graph, rotation)
        if any(len(f) != 3 for f in faces):
            raise NotATriangulation("embedding has a non-triangular face")
        if _component_count(self.graph) != 1:
            raise NotATriangulation("graph is disconnected")
        object.__setattr__(self, "faces", tuple(faces))
        if self.outer_face is not None and self.find_face(self.outer_face) is None:
            raise NotATriangulation(f"outer face {self.outer_face} is not a face")

    @property
    def n(self):
        return self.graph.n

    def facial_triangles(self):
        return sorted(tuple(sorted(f)) for f in self.faces)

    def find_face(self, vertices):
        """The dart-ordered face on this vertex set, or None."""
        key = frozenset(vertices)
        for f in self.faces:
            if frozenset(f) == key:
                return f
        return None

    def outer(self):
        return self.find_face(self.outer_face) if self.outer_face is not None else self.faces[0]

    def mirrored(self):
        return EmbeddedTriangulation(self.graph, tuple(tuple(reversed(r)) for r in self.rotation),
                                     self.outer_face)

    def relabel(self, perm, outer_face=None):
        rot = [None] * self.n
        for v in range(self.n):
            rot[perm[v]] = tuple(perm[w] for w in self.rotation[v])
        if outer_face is None and self.outer_face is not None:
            outer_face = tuple(perm[v] for v in self.outer_face)
        return EmbeddedTriangulation(self.graph.relabel(perm), tuple(rot), outer_face)

    def with_outer(self, face):
        return EmbeddedTriangulation(self.graph, self.rotation, tuple(face))


@dataclass(frozen=True)
class OrientedTriangulation:
    embedding: EmbeddedTriangulation
    orientation: Digraph

    def __post_init__(self):
        if self.orientation.underlying() != self.embedding.graph:
            raise ValueError("orientation does not match the triangulation's edges")

    @property
    def n(self):
        return self.embedding.n


def triangulation_from_faces(n, faces, outer_face=None) -> EmbeddedTriangulation:
    """Rebuild the embedding from dart-ordered triangular faces."""
    succ = [dict() for _ in range(n)]
    edges = set()
    for f in faces:
        for i in range(3):
            v, x, y = f[i], f[(i + 1) % 3], f[(i + 2) % 3]
            # darts y -> v -> x in this face: successor of y at v is x
            succ[v][y] = x
            edges.add((min(v, x), max(v, x)))
    rotation = []
    for v in range(n):
        if not succ[v]:
            raise NotATriangulation(f"vertex {v} lies on no face")
        start = min(succ[v])
        rot = [start]
        w = succ[v][start]
        while w != start:
            rot.append(w)
            w = succ[v][w]
            if len(rot) > len(succ[v]):
                raise InconsistentRotation(f"faces around {v} do not close up")
        if len(rot) != len(succ[v]):
            raise InconsistentRotation(f"faces around {v} form more than one cycle")
        rotation.append(tuple(rot))
    return EmbeddedTriangulation(Graph(n, edges), tuple(rotation), outer_face)


def triangle_embedding() -> EmbeddedTriangulation:
    return EmbeddedTriangulation(Graph(3, [(0, 1), (1, 2), (0, 2)]), ((1, 2), (2, 0), (0, 1)))


def insert_vertex(T: EmbeddedTriangulation, face) -> EmbeddedTriangulation:
    """Stack a new vertex ``n`` into ``face`` and join it to the face's corners."""
    f = T.find_face(face)
    if f is None:
        raise ValueError(f"{face} is not a face")
    w = T.n
    a, b, c = f
    faces = [g for g in T.faces if g != f] + [(a, b, w), (b, c, w), (c, a, w)]
    return triangulation_from_faces(w + 1, faces, T.outer_face)


def tetrahedron() -> EmbeddedTriangulation:
    return insert_vertex(triangle_embedding(), (0, 1, 2))


def octahedron_embedding() -> EmbeddedTriangulation:
    """Octahedron with antipodal pairs {0,1}, {2,3}, {4,5}; outer face (0, 2, 4)."""
    faces = []
    for x in (0, 1):
        for y in (2, 3):
            for z in (4, 5):
                parity = (x + y + z) % 2
                faces.append((x, y, z) if parity == 0 else (x, z, y))
    return triangulation_from_faces(6, faces, (0, 2, 4))


def separating_triangles(T: EmbeddedTriangulation) -> list:
    facial = set(T.facial_triangles())
    return [t for t in triangles(T.graph) if t not in facial]


@dataclass(frozen=True)
class Split:
    """The two sides of a separating triangle.

    ``inside_vertices[i]`` is the original name of vertex ``i`` of
    ``inside`` (likewise for ``outside``).
    """

    inside: OrientedTriangulation
    outside: OrientedTriangulation
    inside_vertices: tuple
    outside_vertices: tuple
    triangle: tuple


def _components_without(G, removed):
    rest = [v for v in range(G.n) if v not in removed]
    comps = []
    seen = set(removed)
    for s in rest:
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for w in G.neighbours(u):
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _restricted_part(OT, vertices, outer):
    index = {v: i for i, v in enumerate(vertices)}
    emb = OT.embedding
    rot = tuple(tuple(index[w] for w in emb.rotation[v] if w in index) for v in vertices)
    graph = emb.graph.induced(vertices)
    E = EmbeddedTriangulation(graph, rot, tuple(index[v] for v in outer))
    return OrientedTriangulation(E, OT.orientation.induced(vertices))


def split_at_triangle(OT: OrientedTriangulation, t) -> Split:
    T = OT.embedding
    t = tuple(sorted(t))
    if t not in separating_triangles(T):
        raise NotSeparating(f"{t} is not a separating triangle")
    comps = _components_without(T.graph, set(t))
    if len(comps) != 2:
        raise NotSeparating(f"removing {t} leaves {len(comps)} components")
    outer = T.outer()
    if any(v in comps[0] for v in outer if v not in t):
        out_c, in_c = comps
    else:
        in_c, out_c = comps
    in_vs = tuple(sorted(set(in_c) | set(t)))
    out_vs = tuple(sorted(set(out_c) | set(t)))
    inside = _restricted_part(OT, in_vs, t)
    outside = _restricted_part(OT, out_vs, outer)
    return Split(inside, outside, in_vs, out_vs, t)


def glue_into_face(T1: EmbeddedTriangulation, T2: EmbeddedTriangulation, ident) -> EmbeddedTriangulation:
    """Glue T2 into a face of T1 along one face of T2.

    ``ident`` maps the three corners of a face of T2 onto the corners of a
    face of T1.  T2 is mirrored when needed so the merged rotations embed.
    New vertices are numbered as in ``digraph.glue``.
    """
    vmap = glue_vertex_map(T1.n, T2.n, ident)
    f1 = T1.find_face(ident.values())
    f2 = T2.find_face(ident.keys())
    if f1 is None or f2 is None or len(ident) != 3:
        raise ValueError("identification must match a face of each triangulation")
    mapped = tuple(vmap[v] for v in f2)
    if _same_cycle(f1, mapped):
        T2 = T2.mirrored()
        f2 = T2.find_face(ident.keys())
        mapped = tuple(vmap[v] for v in f2)
    n = T1.n + T2.n - 3
    rot = [list(r) for r in T1.rotation] + [None] * (n - T1.n)
    for v in range(T2.n):
        r2 = [vmap[w] for w in T2.rotation[v]]
        u = vmap[v]
        if v not in ident:
            rot[u] = r2
            continue
        # T1 face u -> x -> y: rotation at u runs x ... y; T2 contributes y ... x
        i = f1.index(u)
        x, y = f1[(i + 1) % 3], f1[(i + 2) % 3]
        r1 = _rotate_to(tuple(rot[u]), x)
        r2 = _rotate_to(tuple(r2), y)
        if r1[-1] != y or r2[-1] != x:
            raise InconsistentRotation("face corners are not consecutive in the rotation")
        rot[u] = list(r1) + list(r2[1:-1])
    edges = list(T1.graph.edges) + [(vmap[a], vmap[b]) for a, b in T2.graph.edges]
    return EmbeddedTriangulation(Graph(n, edges), tuple(tuple(r) for r in rot), T1.outer_face)


def flip_edge(T: EmbeddedTriangulation, edge) -> Optional[EmbeddedTriangulation]:
    """Replace ``edge`` by the other diagonal of its quadrilateral; None if that diagonal exists."""
    u, v = edge
    f1 = f2 = None
    for f in T.faces:
        if u in f and v in f:
            i = f.index(u)
            if f[(i + 1) % 3] == v:
                f1 = f
            else:
                f2 = f
    a = next(x for x in f1 if x not in (u, v))
    b = next(x for x in f2 if x not in (u, v))
    if T.graph.has_edge(a, b):
        return None
    faces = [f for f in T.faces if f not in (f1, f2)] + [(u, b, a), (b, v, a)]
    return triangulation_from_faces(T.n, faces)


def generate_stacked(n: int, seed=0) -> EmbeddedTriangulation:
    """K4 plus ``n - 4`` vertices, each stacked into a seeded-random face."""
    if n < 4:
        raise ValueError("stacked triangulations start at n = 4")
    rng = random.Random(seed)
    T = tetrahedron()
    while T.n < n:
        T = insert_vertex(T, rng.choice(sorted(T.faces)))
    return T


def generate_triangulations(n: int) -> list:
    """One embedding per isomorphism class of triangulations on ``n`` vertices.

    Diagonal flips connect all triangulations on a fixed vertex count, so a
    search over flips from a stacked triangulation, deduplicated by graph
    canonical form, reaches every class.  (For n >= 4 triangulations are
    3-connected, so graph isomorphism is embedding isomorphism up to mirror.)
    """
    if n == 3:
        return [triangle_embedding()]
    start = generate_stacked(n)
    seen = {canonical_form(start.graph, limit=max(CANON_MAX_N, n)): start}
    frontier = [start]
    while frontier:
        nxt = []
        for T in frontier:
            for e in T.graph.edges:
                F = flip_edge(T, e)
                if F is None:
                    continue
                key = canonical_form(F.graph, limit=max(CANON_MAX_N, n))
                if key not in seen:
                    seen[key] = F
                    nxt.append(F)
        frontier = nxt
    return [seen[k] for k in sorted(seen)]


# planar_code ---------------------------------------------------------------

def write_planar_code(triangulations) -> bytes:
    """Encode embeddings: header, then per graph n and 1-based 0-terminated rotations."""
    out = bytearray(PLANAR_CODE_HEADER)
    for T in triangulations:
        if T.n >= 256:
            raise ValueError("single-byte planar_code needs n < 256")
        out.append(T.n)
        for v in range(T.n):
            out.extend(w + 1 for w in T.rotation[v])
            out.append(0)
    return bytes(out)


def read_planar_code(data: bytes) -> list:
    if not data.startswith(PLANAR_CODE_HEADER):
        raise BadHeader("stream does not start with >>planar_code<<")
    pos = len(PLANAR_CODE_HEADER)
    result = []
    while pos < len(data):
        n = data[pos]
        pos += 1
        if n == 0:
            raise NotATriangulation("graph with zero vertices")
        rotation = []
        for v in range(n):
            rot = []
            while True:
                if pos >= len(data):
                    raise TruncatedStream(f"stream ends inside graph {len(result)}")
                b = data[pos]
                pos += 1
                if b == 0:
                    break
                if b > n:
                    raise NotATriangulation(f"neighbour {b} exceeds n = {n}")
                rot.append(b - 1)
            rotation.append(tuple(rot))
        edges = set()
        for v in range(n):
            for w in rotation[v]:
                if w == v:
                    raise NotATriangulation(f"loop at vertex {v}")
                edges.add((min(v, w), max(v, w)))
        try:
            result.append(EmbeddedTriangulation(Graph(n, edges), tuple(rotation)))
        except (InconsistentRotation, NotPlanarEmbedding) as exc:
            raise NotATriangulation(str(exc)) from exc
    return result


# orientations ----------------------------------------------------------------

def enumerate_orientations(G: Graph, mod_iso=False, max_edges=MAX_ORIENTATION_EDGES):
    """Stream orientations in edge-index binary order, optionally one per iso class."""
    m = len(G.edges)
    if m > max_edges:
        raise BudgetExceeded(f"{m} edges exceed the orientation cap {max_edges}")
    seen = set()
    for idx in range(1 << m):
        D = Digraph(G.n, kernels.orientation_arcs(G.edges, idx))
        if mod_iso:
            key = canonical_form(D)
            if key in seen:
                continue
            seen.add(key)
        yield D
