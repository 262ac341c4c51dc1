"""Pure-Python hot kernels.

Every function here has a twin with the same signature and results in
``_ckernels.pyx``.  Vertex sets are int bitmasks; ``out_rows[v]`` is the set of
out-neighbours of ``v``.
"""

BACKEND = "python"

TRIANGLE_PATTERNS = 0b01111110   # the six non-monochromatic 3-bit patterns
PAIR_PATTERNS = 0b1111


def _bits(x):
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


def solve_colouring(n, out_rows, in_rows, k, order, pre, tri_pairs,
                    break_symmetry=True, find_all=False, node_limit=0):
    """Backtracking acyclic k-colouring.

    Per colour class the transitive closure restricted to the class is kept
    up to date, so a placement is rejected in O(class size) when it would
    close a directed cycle.  ``pre[v]`` is 0 for a free vertex.  ``tri_pairs[v]``
    lists, for every constrained triangle through ``v``, the mask of its
    other two corners.

    Returns ``(solutions, nodes, complete)``; ``complete`` is False only when
    ``node_limit`` cut the search short.
    """
    colour = [0] * n
    members = [0] * (k + 1)
    reach = [0] * n
    solutions = []
    nodes = 0
    aborted = False

    def rec(i, maxused):
        nonlocal nodes, aborted
        if i == n:
            solutions.append(tuple(colour))
            return not find_all
        nodes += 1
        if node_limit and nodes > node_limit:
            aborted = True
            return True
        v = order[i]
        if pre[v]:
            cands = (pre[v],)
        else:
            top = min(k, maxused + 1) if break_symmetry else k
            cands = range(1, top + 1)
        vbit = 1 << v
        for c in cands:
            M = members[c]
            bad = False
            for pm in tri_pairs[v]:
                if M & pm == pm:
                    bad = True
                    break
            if bad:
                continue
            ov = out_rows[v] & M
            iv = in_rows[v] & M
            R = ov
            for w in _bits(ov):
                R |= reach[w]
            if R & iv:
                continue
            add = vbit | R
            saved = []
            for u in _bits(M):
                if (iv >> u) & 1 or reach[u] & iv:
                    saved.append((u, reach[u]))
                    reach[u] |= add
            reach[v] = R
            members[c] = M | vbit
            colour[v] = c
            stop = rec(i + 1, c if c > maxused else maxused)
            colour[v] = 0
            members[c] = M
            reach[v] = 0
            for u, r in saved:
                reach[u] = r
            if stop:
                return True
        return False

    rec(0, 0)
    return solutions, nodes, not aborted


def acyclic_table(n, out_rows):
    """bytearray over all 2**n vertex subsets: 1 where the induced subdigraph is acyclic."""
    size = 1 << n
    acyc = bytearray(size)
    acyc[0] = 1
    for S in range(1, size):
        x = S
        while x:
            b = x & -x
            v = b.bit_length() - 1
            if out_rows[v] & S == 0:
                acyc[S] = acyc[S ^ b]
                break
            x ^= b
    return acyc


def orientation_rows(n, edges, idx):
    """Out-rows of orientation ``idx``: bit i set reverses edges[i]."""
    out = [0] * n
    for i, (u, v) in enumerate(edges):
        if (idx >> i) & 1:
            out[v] |= 1 << u
        else:
            out[u] |= 1 << v
    return out


def sweep_orientations(n, edges, start, stop, cons_tris, check_sets):
    """Check 2-colourability properties for orientation indices in [start, stop).

    A 2-colouring is encoded by the set S of vertices with colour 2.  It is
    valid if both classes are acyclic and no triangle of ``cons_tris`` is
    monochromatic.  With empty ``check_sets`` an orientation passes when some
    valid colouring exists.  Otherwise every listed vertex pair must see all 4
    colour patterns and every listed triple all 6 non-monochromatic patterns
    among the valid colourings.

    Returns ``(checked, fail_index, fail_set, missing_patterns)`` with
    ``fail_index == -1`` when everything passed.
    """
    full = (1 << n) - 1
    tri_masks = [(1 << a) | (1 << b) | (1 << c) for a, b, c in cons_tris]
    required = [TRIANGLE_PATTERNS if len(s) == 3 else PAIR_PATTERNS for s in check_sets]
    for idx in range(start, stop):
        out = orientation_rows(n, edges, idx)
        acyc = acyclic_table(n, out)
        seen = [0] * len(check_sets)
        any_valid = False
        for S in range(full + 1):
            if not acyc[S] or not acyc[full ^ S]:
                continue
            ok = True
            for tm in tri_masks:
                t = S & tm
                if t == 0 or t == tm:
                    ok = False
                    break
            if not ok:
                continue
            any_valid = True
            for j, verts in enumerate(check_sets):
                p = 0
                for pos, w in enumerate(verts):
                    p |= ((S >> w) & 1) << pos
                seen[j] |= 1 << p
        if not check_sets:
            if not any_valid:
                return idx - start + 1, idx, -1, 0
            continue
        for j, req in enumerate(required):
            if seen[j] & req != req:
                return idx - start + 1, idx, j, req & ~seen[j]
    return stop - start, -1, -1, 0


# canonical labelling by individualisation-refinement

def _refine(n, out_rows, in_rows, cells):
    """Equitable refinement of an ordered partition (list of vertex lists).

    Cells are split by the vector of (out, in) neighbour counts into every
    current cell; the pieces are ordered by that vector, so the result does
    not depend on vertex names.
    """
    while True:
        masks = []
        for cell in cells:
            m = 0
            for v in cell:
                m |= 1 << v
            masks.append(m)
        new = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new.append(cell)
                continue
            groups = {}
            for v in cell:
                sig = []
                for m in masks:
                    sig.append((out_rows[v] & m).bit_count())
                    sig.append((in_rows[v] & m).bit_count())
                groups.setdefault(tuple(sig), []).append(v)
            if len(groups) > 1:
                changed = True
                for key in sorted(groups):
                    new.append(sorted(groups[key]))
            else:
                new.append(cell)
        cells = new
        if not changed:
            return cells


def _leaf_code(n, out_rows, lab):
    pos = [0] * n
    for i, v in enumerate(lab):
        pos[v] = i
    code = []
    for v in lab:
        row = 0
        for w in _bits(out_rows[v]):
            row |= 1 << pos[w]
        code.append(row)
    return tuple(code)


def _orbit_root(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def canonical_label(n, out_rows):
    """Canonical adjacency code of a digraph: equal iff isomorphic.

    The code is the lexicographically least tuple of relabelled out-rows over
    all leaves of the individualisation-refinement tree.  Automorphisms found
    along the way prune children that lie in an explored orbit.
    """
    if n == 0:
        return ()
    in_rows = [0] * n
    for u in range(n):
        for w in _bits(out_rows[u]):
            in_rows[w] |= 1 << u
    best = [None, None]     # code, lab
    autos = []

    def search(cells, prefix):
        cells = _refine(n, out_rows, in_rows, cells)
        target = -1
        for i, cell in enumerate(cells):
            if len(cell) > 1:
                target = i
                break
        if target < 0:
            lab = [cell[0] for cell in cells]
            code = _leaf_code(n, out_rows, lab)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, lab
            elif code == best[0]:
                gamma = [0] * n
                for a, b in zip(lab, best[1]):
                    gamma[a] = b
                autos.append(gamma)
            return
        cell = cells[target]
        explored = []
        for v in cell:
            if explored:
                parent = list(range(n))
                for g in autos:
                    if all(g[p] == p for p in prefix):
                        for x in range(n):
                            rx, ry = _orbit_root(parent, x), _orbit_root(parent, g[x])
                            if rx != ry:
                                parent[rx] = ry
                rv = _orbit_root(parent, v)
                if any(_orbit_root(parent, e) == rv for e in explored):
                    continue
            explored.append(v)
            rest = [w for w in cell if w != v]
            search(cells[:target] + [[v], rest] + cells[target + 1:], prefix + [v])

    search([list(range(n))], [])
    return best[0]


def canonical_labels_of_orientations(n, edges, start, stop):
    """Set of canonical codes over orientation indices [start, stop)."""
    return {canonical_label(n, orientation_rows(n, edges, idx)) for idx in range(start, stop)}
