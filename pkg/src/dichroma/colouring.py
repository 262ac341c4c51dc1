"""Exact acyclic colouring: search, verification, dichromatic numbers, merging."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from . import kernels
from .digraph import (Digraph, Graph, glue, glue_vertex_map, is_acyclic,
                      is_tournament_on, triangles)
from .errors import (BudgetExceeded, ColourOutOfRange, ColouringDisagreement,
                     EmptyDigraph, InvalidInputColouring, LengthMismatch,
                     NotATournament, VertexOutOfRange)

MAX_ORIENTATION_EDGES = 24
ENUMERATION_BUDGET = 1 << 20


@dataclass(frozen=True)
class ColouringConstraints:
    """What a colouring must satisfy besides acyclic colour classes.

    ``triangles``, when given, lists the only triangles that may not be
    monochromatic (e.g. the facial ones) and overrides
    ``forbid_mono_triangles``.
    """

    k: int = 2
    pre: Mapping = field(default_factory=dict)
    forbid_mono_triangles: bool = False
    triangles: Optional[Sequence] = None

    def __post_init__(self):
        if self.k < 1:
            raise ColourOutOfRange("need at least one colour")
        for v, c in self.pre.items():
            if not 1 <= c <= self.k:
                raise ColourOutOfRange(f"pre-colour {c} of vertex {v} outside 1..{self.k}")

    def constrained_triangles(self, D):
        if self.triangles is not None:
            return [tuple(t) for t in self.triangles]
        if self.forbid_mono_triangles:
            return triangles(D)
        return []


@dataclass(frozen=True)
class SolveResult:
    colouring: Optional[tuple]
    nodes_explored: int

    @property
    def found(self):
        return self.colouring is not None

    @property
    def outcome(self):
        return "found" if self.found else "unsatisfiable"


def _check_constraints(D, cons):
    for v in cons.pre:
        if not 0 <= v < D.n:
            raise VertexOutOfRange(f"pre-coloured vertex {v} not in digraph")
    tris = cons.constrained_triangles(D)
    for t in tris:
        a, b, c = t
        if not (D.adjacent(a, b) and D.adjacent(b, c) and D.adjacent(a, c)):
            raise ValueError(f"{t} is not a triangle of the underlying graph")
    return tris


def search_order(D: Digraph, first=()):
    """Vertex order for the backtracking search.

    ``first`` (the pre-coloured vertices) leads; after that the next vertex
    is the one with most neighbours already placed, then highest degree,
    then lowest index.  With nothing placed this is plain descending degree.
    """
    adj = [D.out_rows[v] | D.in_rows[v] for v in range(D.n)]
    deg = [a.bit_count() for a in adj]
    order = list(first)
    placed = 0
    for v in order:
        placed |= 1 << v
    remaining = [v for v in range(D.n) if not (placed >> v) & 1]
    while remaining:
        best = max(remaining, key=lambda v: ((adj[v] & placed).bit_count(), deg[v], -v))
        order.append(best)
        placed |= 1 << best
        remaining.remove(best)
    return order


def _tri_pairs(n, tris):
    pairs = [[] for _ in range(n)]
    for a, b, c in tris:
        pairs[a].append((1 << b) | (1 << c))
        pairs[b].append((1 << a) | (1 << c))
        pairs[c].append((1 << a) | (1 << b))
    return pairs


def _run(D, cons, find_all=False, node_limit=0):
    tris = _check_constraints(D, cons)
    pre = [0] * D.n
    for v, c in cons.pre.items():
        pre[v] = c
    order = search_order(D, sorted(cons.pre))
    return kernels.solve_colouring(D.n, list(D.out_rows), list(D.in_rows), cons.k, order,
                                   pre, _tri_pairs(D.n, tris),
                                   break_symmetry=not cons.pre and not find_all,
                                   find_all=find_all, node_limit=node_limit)


def verify_colouring(D: Digraph, c, cons: ColouringConstraints) -> bool:
    if len(c) != D.n:
        raise LengthMismatch(f"colouring has length {len(c)}, digraph has {D.n} vertices")
    for x in c:
        if not 1 <= x <= cons.k:
            raise ColourOutOfRange(f"colour {x} outside 1..{cons.k}")
    for v, x in cons.pre.items():
        if c[v] != x:
            return False
    for colour in range(1, cons.k + 1):
        if not is_acyclic(D, [v for v in range(D.n) if c[v] == colour]):
            return False
    for a, b, t in cons.constrained_triangles(D):
        if c[a] == c[b] == c[t]:
            return False
    return True


def find_colouring(D: Digraph, cons: ColouringConstraints = ColouringConstraints()) -> SolveResult:
    sols, nodes, _ = _run(D, cons)
    if sols:
        col = sols[0]
        assert verify_colouring(D, col, cons), "solver returned an invalid colouring"
        return SolveResult(col, nodes)
    return SolveResult(None, nodes)


def enumerate_colourings(D: Digraph, cons: ColouringConstraints = ColouringConstraints(),
                         budget=ENUMERATION_BUDGET) -> list:
    """Every colouring accepted by ``verify_colouring``, sorted."""
    if cons.k ** D.n > budget:
        raise BudgetExceeded(f"{cons.k}^{D.n} colourings exceed budget {budget}")
    sols, _, _ = _run(D, cons, find_all=True)
    return sorted(sols)


def dichromatic_number(D: Digraph) -> int:
    if D.n == 0:
        raise EmptyDigraph("dichromatic number of the empty digraph is undefined")
    k = 1
    while not find_colouring(D, ColouringConstraints(k=k)).found:
        k += 1
    return k


def orientations(G: Graph):
    """All 2^|E| orientations; bit i of the index reverses ``G.edges[i]``."""
    for idx in range(1 << len(G.edges)):
        yield Digraph(G.n, kernels.orientation_arcs(G.edges, idx))


def tournament_classes(n: int) -> list:
    """One tournament per isomorphism class on ``n`` vertices, canonical form, sorted.

    Built by extension: every n-tournament minus its last vertex is an
    (n-1)-tournament, so adding a vertex with every possible out-set to each
    smaller class reaches every class.
    """
    if n <= 1:
        return [Digraph(n, ())]
    codes = {(0,)}
    for m in range(1, n):
        nxt = set()
        for code in codes:
            base = [row for row in code] + [0]
            for outset in range(1 << m):
                rows = list(base)
                for u in range(m):
                    if (outset >> u) & 1:
                        rows[m] |= 1 << u
                    else:
                        rows[u] |= 1 << m
                nxt.add(kernels.canonical_label(m + 1, rows))
        codes = nxt
    return [_digraph_from_code(code) for code in sorted(codes)]


def _digraph_from_code(code):
    n = len(code)
    return Digraph(n, [(u, v) for u in range(n) for v in range(n) if (code[u] >> v) & 1])


@dataclass(frozen=True)
class OrientationMaximum:
    value: int
    witness: Digraph
    instances: int


def max_dichromatic_over_orientations(G: Graph, mod_iso=False,
                                      max_edges=MAX_ORIENTATION_EDGES) -> OrientationMaximum:
    """Largest dichromatic number over orientations of G, with a witness.

    ``mod_iso`` on a complete graph iterates tournament isomorphism classes
    instead of all orientations.
    """
    complete = len(G.edges) == G.n * (G.n - 1) // 2
    if mod_iso and complete:
        candidates = tournament_classes(G.n)
    elif len(G.edges) > max_edges:
        raise BudgetExceeded(f"{len(G.edges)} edges exceed the orientation cap {max_edges}")
    else:
        candidates = orientations(G)
    if G.n == 0:
        raise EmptyDigraph("graph has no vertices")
    best, witness, count = 0, None, 0
    for D in candidates:
        count += 1
        if best and find_colouring(D, ColouringConstraints(k=best)).found:
            continue
        k = best + 1
        while not find_colouring(D, ColouringConstraints(k=k)).found:
            k += 1
        best, witness = k, D
    return OrientationMaximum(best, witness, count)


def graph_dichromatic_number(G: Graph, mod_iso=False, max_edges=MAX_ORIENTATION_EDGES) -> int:
    return max_dichromatic_over_orientations(G, mod_iso, max_edges).value


def _valid_acyclic(D, c):
    k = max(c) if c else 1
    return all(is_acyclic(D, [v for v in range(D.n) if c[v] == x]) for x in range(1, k + 1))


def merge_colourings(D1: Digraph, c1, D2: Digraph, c2, ident) -> tuple:
    """Common extension of two acyclic colourings agreeing on a shared tournament.

    ``ident`` maps vertices of D2 onto vertices of D1 as in ``glue``.
    """
    if len(c1) != D1.n or len(c2) != D2.n:
        raise InvalidInputColouring("colouring length does not match digraph")
    if not _valid_acyclic(D1, c1) or not _valid_acyclic(D2, c2):
        raise InvalidInputColouring("input colouring has a cyclic colour class")
    if not is_tournament_on(D1, ident.values()) or not is_tournament_on(D2, ident.keys()):
        raise NotATournament("the digraphs do not intersect in a tournament")
    for a, b in ident.items():
        if c2[a] != c1[b]:
            raise ColouringDisagreement(f"vertex {b} coloured {c1[b]} and {c2[a]}")
    D = glue(D1, D2, ident)
    vmap = glue_vertex_map(D1.n, D2.n, ident)
    merged = list(c1) + [0] * (D.n - D1.n)
    for v in range(D2.n):
        merged[vmap[v]] = c2[v]
    merged = tuple(merged)
    assert _valid_acyclic(D, merged), "merged colouring has a cyclic class"
    return merged
