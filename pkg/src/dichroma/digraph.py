"""Digraphs, undirected graphs, and the elementary operations on them.

Vertices are the integers ``0..n-1``.  Both graph types keep adjacency as
int bitmask rows next to a sorted tuple of arcs/edges, and are immutable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import kernels
from .errors import (AntiParallelPair, ArcNotPresent, DuplicateArc,
                     InvalidIdentification, LoopArc, OrientationConflict,
                     ParseError, SizeLimitExceeded, VertexOutOfRange)

CANON_MAX_N = 10

Colouring = tuple          # colours[v] in 1..k
PreColouring = Mapping     # vertex -> colour
VertexIdentification = Mapping  # vertex of the second graph -> vertex of the first


def _check_pair(n, u, v, what):
    if not (0 <= u < n and 0 <= v < n):
        raise VertexOutOfRange(f"{what} ({u}, {v}) has an endpoint outside 0..{n - 1}")
    if u == v:
        raise LoopArc(f"loop at vertex {u}")


@dataclass(frozen=True)
class Digraph:
    """Loopless digraph without parallel or anti-parallel arcs."""

    n: int
    arcs: tuple
    out_rows: tuple = field(init=False, repr=False, compare=False)
    in_rows: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        out = [0] * self.n
        inn = [0] * self.n
        arcs = sorted(set((int(u), int(v)) for u, v in self.arcs))
        for u, v in arcs:
            _check_pair(self.n, u, v, "arc")
            if (out[v] >> u) & 1:
                raise AntiParallelPair(f"arcs ({u}, {v}) and ({v}, {u}) both present")
            out[u] |= 1 << v
            inn[v] |= 1 << u
        object.__setattr__(self, "arcs", tuple(arcs))
        object.__setattr__(self, "out_rows", tuple(out))
        object.__setattr__(self, "in_rows", tuple(inn))

    def has_arc(self, u, v):
        return bool((self.out_rows[u] >> v) & 1)

    def adjacent(self, u, v):
        return bool(((self.out_rows[u] | self.in_rows[u]) >> v) & 1)

    def underlying(self) -> "Graph":
        return Graph(self.n, self.arcs)

    def induced(self, vertices):
        """Induced subdigraph on ``vertices``, relabelled in the given order."""
        index = {v: i for i, v in enumerate(vertices)}
        return Digraph(len(index), [(index[u], index[v]) for u, v in self.arcs
                                    if u in index and v in index])

    def relabel(self, perm):
        """Digraph with vertex ``v`` renamed ``perm[v]``."""
        return Digraph(self.n, [(perm[u], perm[v]) for u, v in self.arcs])

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; ``edges`` holds pairs with ``u < v``."""

    n: int
    edges: tuple
    adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj = [0] * self.n
        edges = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            _check_pair(self.n, u, v, "edge")
            edges.add((min(u, v), max(u, v)))
        edges = sorted(edges)
        for u, v in edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "adj", tuple(adj))

    def has_edge(self, u, v):
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v):
        return self.adj[v].bit_count()

    def neighbours(self, v):
        return [w for w in range(self.n) if (self.adj[v] >> w) & 1]

    def induced(self, vertices):
        index = {v: i for i, v in enumerate(vertices)}
        return Graph(len(index), [(index[u], index[v]) for u, v in self.edges
                                  if u in index and v in index])

    def relabel(self, perm):
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def add_edges(self, extra):
        return Graph(self.n, list(self.edges) + list(extra))

    def __len__(self):
        return self.n


def validate_digraph(n: int, raw_arcs: Iterable) -> Digraph:
    """Build a Digraph, rejecting loops, duplicates and anti-parallel pairs."""
    seen = set()
    for u, v in raw_arcs:
        _check_pair(n, u, v, "arc")
        if (u, v) in seen:
            raise DuplicateArc(f"arc ({u}, {v}) listed twice")
        if (v, u) in seen:
            raise AntiParallelPair(f"arcs ({v}, {u}) and ({u}, {v}) both present")
        seen.add((u, v))
    return Digraph(n, tuple(seen))


def _mask(D, X):
    m = 0
    for v in X:
        if not 0 <= v < D.n:
            raise VertexOutOfRange(f"vertex {v} not in 0..{D.n - 1}")
        m |= 1 << v
    return m


def is_acyclic(D: Digraph, X=None) -> bool:
    """True iff the subdigraph induced by ``X`` (default: all vertices) has no directed cycle."""
    S = (1 << D.n) - 1 if X is None else _mask(D, X)
    out = D.out_rows
    # peel sinks until none is left
    while S:
        x = S
        while x:
            b = x & -x
            if out[b.bit_length() - 1] & S == 0:
                S ^= b
                break
            x ^= b
        else:
            return False
    return True


def reverse_all(D: Digraph) -> Digraph:
    return Digraph(D.n, [(v, u) for u, v in D.arcs])


def reverse_arc(D: Digraph, arc) -> Digraph:
    u, v = arc
    if not (0 <= u < D.n and 0 <= v < D.n) or not D.has_arc(u, v):
        raise ArcNotPresent(f"arc ({u}, {v}) not in digraph")
    return Digraph(D.n, [(v, u) if a == (u, v) else a for a in D.arcs])


def glue_vertex_map(n1: int, n2: int, ident: VertexIdentification) -> list:
    """Where each vertex of the second digraph lands in ``glue``'s result.

    Identified vertices take their partner's name; the others are numbered
    from ``n1`` upwards in increasing order.
    """
    images = list(ident.values())
    if len(set(images)) != len(images):
        raise InvalidIdentification("identification is not injective")
    for a, b in ident.items():
        if not (0 <= a < n2 and 0 <= b < n1):
            raise InvalidIdentification(f"pair {a} -> {b} out of range")
    vmap = []
    nxt = n1
    for v in range(n2):
        if v in ident:
            vmap.append(ident[v])
        else:
            vmap.append(nxt)
            nxt += 1
    return vmap


def glue(D1: Digraph, D2: Digraph, ident: VertexIdentification) -> Digraph:
    """Union of two digraphs after identifying ``v`` of D2 with ``ident[v]`` of D1.

    Arcs present in both parts must agree in direction.
    """
    vmap = glue_vertex_map(D1.n, D2.n, ident)
    arcs = set(D1.arcs)
    for u, v in D2.arcs:
        a, b = vmap[u], vmap[v]
        if (b, a) in arcs:
            raise OrientationConflict(f"identified edge {{{a}, {b}}} is oriented both ways")
        arcs.add((a, b))
    return Digraph(D1.n + D2.n - len(ident), tuple(arcs))


def glue_graphs(G1: Graph, G2: Graph, ident: VertexIdentification) -> Graph:
    vmap = glue_vertex_map(G1.n, G2.n, ident)
    return Graph(G1.n + G2.n - len(ident), list(G1.edges) + [(vmap[u], vmap[v]) for u, v in G2.edges])


def triangles(G) -> list:
    """All 3-cliques as sorted triples, in lexicographic order."""
    adj = G.adj if isinstance(G, Graph) else G.underlying().adj
    out = []
    for u in range(len(adj)):
        higher = adj[u] >> (u + 1) << (u + 1)
        x = higher
        while x:
            b = x & -x
            v = b.bit_length() - 1
            x ^= b
            common = higher & adj[v] >> (v + 1) << (v + 1)
            while common:
                c = common & -common
                out.append((u, v, c.bit_length() - 1))
                common ^= c
    return out


def is_tournament_on(D: Digraph, X) -> bool:
    X = list(X)
    for u, v in itertools.combinations(X, 2):
        if not D.adjacent(u, v):
            return False
    return True


def canonical_form(G, limit=CANON_MAX_N) -> tuple:
    """Label shared exactly by isomorphic inputs (digraphs and graphs never collide)."""
    if G.n > limit:
        raise SizeLimitExceeded(f"canonical_form supports n <= {limit}, got {G.n}")
    if isinstance(G, Graph):
        return ("G", G.n, kernels.canonical_label(G.n, G.adj))
    return ("D", G.n, kernels.canonical_label(G.n, G.out_rows))


# plain-text format -----------------------------------------------------------

def _parse_pairs(text):
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise ParseError("empty input")
    lineno, header = lines[0]
    parts = header.split()
    try:
        n, m = int(parts[0]), int(parts[1])
        if len(parts) != 2 or n < 0 or m < 0:
            raise ValueError
    except (ValueError, IndexError):
        raise ParseError(f"expected header 'n m', got {header!r}", lineno) from None
    body = lines[1:]
    if len(body) < m:
        raise ParseError(f"header announces {m} pairs but only {len(body)} follow", lineno)
    pairs = []
    for lineno, line in body[:m]:
        parts = line.split()
        try:
            u, v = int(parts[0]), int(parts[1])
            if len(parts) != 2:
                raise ValueError
        except (ValueError, IndexError):
            raise ParseError(f"expected 'u v', got {line!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex out of range 0..{n - 1}", lineno)
        pairs.append((u, v))
    return n, pairs, body[m:]


def parse_digraph(text: str) -> Digraph:
    n, pairs, _ = _parse_pairs(text)
    return validate_digraph(n, pairs)


def parse_graph(text: str) -> Graph:
    n, pairs, _ = _parse_pairs(text)
    return Graph(n, pairs)


def format_pairs(G, comment=None) -> str:
    pairs = G.edges if isinstance(G, Graph) else G.arcs
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{G.n} {len(pairs)}")
    lines.extend(f"{u} {v}" for u, v in pairs)
    return "\n".join(lines) + "\n"


# named graphs used throughout --------------------------------------------------

def complete_graph(n):
    return Graph(n, itertools.combinations(range(n), 2))


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def wagner_graph():
    """C8 plus the four long diagonals."""
    return Graph(8, [(i, (i + 1) % 8) for i in range(8)] + [(i, i + 4) for i in range(4)])


def octahedron_graph():
    """Complete tripartite graph K(2,2,2); parts are {0,1}, {2,3}, {4,5}."""
    return Graph(6, [(u, v) for u, v in itertools.combinations(range(6), 2) if u // 2 != v // 2])


def complete_bipartite(a, b):
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def directed_cycle(n):
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def transitive_tournament(n):
    return Digraph(n, itertools.combinations(range(n), 2))
