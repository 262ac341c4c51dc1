# cython: language_level=3
"""Compiled hot kernels; results identical to ``_pykernels``.

Bit-parallel over uint64 rows, so digraphs are limited to 64 vertices
(``MAX_N``); callers route larger inputs to the Python kernels.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, free, calloc
from libc.string cimport memcpy, memset

BACKEND = "cython"
MAX_N = 64
MAX_SWEEP_N = 24
MAX_CANON_N = 32

cdef enum:
    TRIANGLE_PATTERNS = 0b01111110
    PAIR_PATTERNS = 0b1111


cdef inline int lowbit(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef inline int popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


# ---------------------------------------------------------------- solver

cdef struct SolveState:
    int n
    int k
    uint64_t *out_rows
    uint64_t *in_rows
    int *order
    int *pre
    int *tri_start      # CSR offsets into tri_masks, length n + 1
    uint64_t *tri_masks
    int *colour
    uint64_t *members   # length k + 1
    uint64_t *reach     # length n
    uint64_t *saved     # (n + 1) * n scratch for undo
    bint break_symmetry
    bint find_all
    int64_t nodes
    int64_t node_limit
    bint aborted


cdef int _rec(SolveState *st, int i, int maxused, list solutions) except -1:
    cdef int n = st.n
    cdef int v, c, top, lo, hi, u, j
    cdef uint64_t M, ov, iv, R, x, vbit, add, pm, touched
    cdef uint64_t *save
    cdef int stop
    if i == n:
        solutions.append(tuple([st.colour[j] for j in range(n)]))
        return 0 if st.find_all else 1
    st.nodes += 1
    if st.node_limit and st.nodes > st.node_limit:
        st.aborted = True
        return 1
    v = st.order[i]
    if st.pre[v]:
        lo = st.pre[v]
        hi = st.pre[v]
    else:
        lo = 1
        top = st.k
        if st.break_symmetry and maxused + 1 < top:
            top = maxused + 1
        hi = top
    vbit = (<uint64_t>1) << v
    save = st.saved + i * n
    for c in range(lo, hi + 1):
        M = st.members[c]
        pm = 0
        for j in range(st.tri_start[v], st.tri_start[v + 1]):
            if M & st.tri_masks[j] == st.tri_masks[j]:
                pm = 1
                break
        if pm:
            continue
        ov = st.out_rows[v] & M
        iv = st.in_rows[v] & M
        R = ov
        x = ov
        while x:
            R |= st.reach[lowbit(x)]
            x &= x - 1
        if R & iv:
            continue
        add = vbit | R
        touched = 0
        x = M
        while x:
            u = lowbit(x)
            x &= x - 1
            if ((iv >> u) & 1) or (st.reach[u] & iv):
                save[u] = st.reach[u]
                touched |= (<uint64_t>1) << u
                st.reach[u] |= add
        st.reach[v] = R
        st.members[c] = M | vbit
        st.colour[v] = c
        stop = _rec(st, i + 1, c if c > maxused else maxused, solutions)
        st.colour[v] = 0
        st.members[c] = M
        st.reach[v] = 0
        x = touched
        while x:
            u = lowbit(x)
            x &= x - 1
            st.reach[u] = save[u]
        if stop:
            return 1
    return 0


def solve_colouring(int n, out_rows, in_rows, int k, order, pre, tri_pairs,
                    bint break_symmetry=True, bint find_all=False, node_limit=0):
    """See ``_pykernels.solve_colouring``."""
    if n > MAX_N:
        raise ValueError("compiled solver supports at most 64 vertices")
    cdef SolveState st
    cdef int i, total = 0
    cdef list solutions = []
    for i in range(n):
        total += len(tri_pairs[i])
    st.n = n
    st.k = k
    st.out_rows = <uint64_t *>malloc(sizeof(uint64_t) * (n + 1))
    st.in_rows = <uint64_t *>malloc(sizeof(uint64_t) * (n + 1))
    st.order = <int *>malloc(sizeof(int) * (n + 1))
    st.pre = <int *>malloc(sizeof(int) * (n + 1))
    st.tri_start = <int *>malloc(sizeof(int) * (n + 1))
    st.tri_masks = <uint64_t *>malloc(sizeof(uint64_t) * (total + 1))
    st.colour = <int *>calloc(n + 1, sizeof(int))
    st.members = <uint64_t *>calloc(k + 2, sizeof(uint64_t))
    st.reach = <uint64_t *>calloc(n + 1, sizeof(uint64_t))
    st.saved = <uint64_t *>calloc((n + 1) * (n + 1), sizeof(uint64_t))
    try:
        total = 0
        for i in range(n):
            st.out_rows[i] = out_rows[i]
            st.in_rows[i] = in_rows[i]
            st.order[i] = order[i]
            st.pre[i] = pre[i]
            st.tri_start[i] = total
            for pm in tri_pairs[i]:
                st.tri_masks[total] = pm
                total += 1
        st.tri_start[n] = total
        st.break_symmetry = break_symmetry
        st.find_all = find_all
        st.nodes = 0
        st.node_limit = node_limit
        st.aborted = False
        _rec(&st, 0, 0, solutions)
        return solutions, st.nodes, not st.aborted
    finally:
        free(st.out_rows); free(st.in_rows); free(st.order); free(st.pre)
        free(st.tri_start); free(st.tri_masks); free(st.colour)
        free(st.members); free(st.reach); free(st.saved)


# ---------------------------------------------------------------- sweeps

cdef void _acyclic_table(int n, uint64_t *out, unsigned char *acyc) nogil:
    cdef uint64_t size = (<uint64_t>1) << n
    cdef uint64_t S, x, b
    cdef int v
    acyc[0] = 1
    for S in range(1, size):
        acyc[S] = 0
        x = S
        while x:
            v = lowbit(x)
            b = (<uint64_t>1) << v
            if out[v] & S == 0:
                acyc[S] = acyc[S ^ b]
                break
            x ^= b


def acyclic_table(int n, out_rows):
    if n > MAX_SWEEP_N:
        raise ValueError("acyclic table limited to 24 vertices")
    cdef uint64_t out[64]
    cdef int i
    for i in range(n):
        out[i] = out_rows[i]
    cdef bytearray res = bytearray(1 << n)
    cdef unsigned char *buf = res
    _acyclic_table(n, out, buf)
    return res


def orientation_rows(n, edges, idx):
    out = [0] * n
    for i, (u, v) in enumerate(edges):
        if (idx >> i) & 1:
            out[v] |= 1 << u
        else:
            out[u] |= 1 << v
    return out


def sweep_orientations(int n, edges, int64_t start, int64_t stop, cons_tris, check_sets):
    """See ``_pykernels.sweep_orientations``."""
    if n > MAX_SWEEP_N:
        raise ValueError("sweep limited to 24 vertices")
    cdef int m = len(edges)
    cdef int nt = len(cons_tris)
    cdef int nc = len(check_sets)
    cdef int *eu = <int *>malloc(sizeof(int) * (m + 1))
    cdef int *ev = <int *>malloc(sizeof(int) * (m + 1))
    cdef uint64_t *tm = <uint64_t *>malloc(sizeof(uint64_t) * (nt + 1))
    cdef int *cs = <int *>malloc(sizeof(int) * 3 * (nc + 1))
    cdef int *cl = <int *>malloc(sizeof(int) * (nc + 1))
    cdef unsigned int *req = <unsigned int *>malloc(sizeof(unsigned int) * (nc + 1))
    cdef unsigned int *seen = <unsigned int *>malloc(sizeof(unsigned int) * (nc + 1))
    cdef unsigned char *acyc = <unsigned char *>malloc((<size_t>1) << n)
    cdef uint64_t out[64]
    cdef uint64_t full = ((<uint64_t>1) << n) - 1
    cdef uint64_t S, t
    cdef int64_t idx
    cdef int i, j, p, pos
    cdef bint ok, any_valid
    cdef int64_t fail_idx = -1
    cdef int fail_set = -1
    cdef unsigned int missing = 0
    try:
        for i, (a, b) in enumerate(edges):
            eu[i] = a
            ev[i] = b
        for i, (a, b, c) in enumerate(cons_tris):
            tm[i] = ((<uint64_t>1) << a) | ((<uint64_t>1) << b) | ((<uint64_t>1) << c)
        for i, s in enumerate(check_sets):
            cl[i] = len(s)
            for pos in range(cl[i]):
                cs[3 * i + pos] = s[pos]
            req[i] = TRIANGLE_PATTERNS if cl[i] == 3 else PAIR_PATTERNS
        with nogil:
            idx = start
            while idx < stop:
                memset(out, 0, sizeof(out))
                for i in range(m):
                    if (idx >> i) & 1:
                        out[ev[i]] |= (<uint64_t>1) << eu[i]
                    else:
                        out[eu[i]] |= (<uint64_t>1) << ev[i]
                _acyclic_table(n, out, acyc)
                for j in range(nc):
                    seen[j] = 0
                any_valid = False
                S = 0
                while S <= full:
                    if acyc[S] and acyc[full ^ S]:
                        ok = True
                        for j in range(nt):
                            t = S & tm[j]
                            if t == 0 or t == tm[j]:
                                ok = False
                                break
                        if ok:
                            any_valid = True
                            for j in range(nc):
                                p = 0
                                for pos in range(cl[j]):
                                    p |= <int>((S >> cs[3 * j + pos]) & 1) << pos
                                seen[j] |= (<unsigned int>1) << p
                    S += 1
                if nc == 0:
                    if not any_valid:
                        fail_idx = idx
                        break
                else:
                    for j in range(nc):
                        if seen[j] & req[j] != req[j]:
                            fail_idx = idx
                            fail_set = j
                            missing = req[j] & ~seen[j]
                            break
                    if fail_idx >= 0:
                        break
                idx += 1
        if fail_idx >= 0:
            return fail_idx - start + 1, fail_idx, fail_set, missing
        return stop - start, -1, -1, 0
    finally:
        free(eu); free(ev); free(tm); free(cs); free(cl); free(req); free(seen); free(acyc)


# ---------------------------------------------------------------- canonical labels

cdef enum:
    CMAX = 32
    MAX_AUTOS = 512

cdef struct CanonState:
    int n
    uint64_t out[CMAX]
    uint64_t inr[CMAX]
    uint64_t best[CMAX]
    int best_lab[CMAX]
    bint have_best
    int nautos
    int autos[MAX_AUTOS][CMAX]


cdef int _refine(CanonState *st, int *lab, int *cstart, int ncells) nogil:
    """Refine in place; ``lab`` lists vertices cell by cell, ``cstart`` holds
    cell starts (with sentinel).  Returns the new cell count."""
    cdef int n = st.n
    cdef uint64_t masks[CMAX]
    cdef int sig[CMAX][2 * CMAX]
    cdef int newstart[CMAX + 1]
    cdef int newlab[CMAX]
    cdef int idxs[CMAX]
    cdef int nnew, c, a, b, i, j, q, v, tmp, cmp, L
    cdef bint changed
    while True:
        for c in range(ncells):
            masks[c] = 0
            for i in range(cstart[c], cstart[c + 1]):
                masks[c] |= (<uint64_t>1) << lab[i]
        nnew = 0
        changed = False
        L = 2 * ncells
        for c in range(ncells):
            a = cstart[c]
            b = cstart[c + 1]
            if b - a == 1:
                newstart[nnew] = a
                newlab[a] = lab[a]
                nnew += 1
                continue
            for i in range(a, b):
                v = lab[i]
                for q in range(ncells):
                    sig[i][2 * q] = popcount(st.out[v] & masks[q])
                    sig[i][2 * q + 1] = popcount(st.inr[v] & masks[q])
                idxs[i - a] = i
            # insertion sort by (signature, vertex)
            for i in range(1, b - a):
                tmp = idxs[i]
                j = i - 1
                while j >= 0:
                    cmp = _sigcmp(sig[idxs[j]], sig[tmp], L)
                    if cmp > 0 or (cmp == 0 and lab[idxs[j]] > lab[tmp]):
                        idxs[j + 1] = idxs[j]
                        j -= 1
                    else:
                        break
                idxs[j + 1] = tmp
            newstart[nnew] = a
            nnew += 1
            newlab[a] = lab[idxs[0]]
            for i in range(1, b - a):
                newlab[a + i] = lab[idxs[i]]
                if _sigcmp(sig[idxs[i - 1]], sig[idxs[i]], L) != 0:
                    newstart[nnew] = a + i
                    nnew += 1
                    changed = True
        for i in range(n):
            lab[i] = newlab[i]
        for c in range(nnew):
            cstart[c] = newstart[c]
        cstart[nnew] = n
        ncells = nnew
        if not changed:
            return ncells


cdef inline int _sigcmp(int *x, int *y, int L) nogil:
    cdef int i
    for i in range(L):
        if x[i] != y[i]:
            return -1 if x[i] < y[i] else 1
    return 0


cdef int _orbit_root(int *parent, int x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef void _canon_search(CanonState *st, int *lab_in, int *cstart_in, int ncells,
                        int *prefix, int plen) nogil:
    cdef int n = st.n
    cdef int lab[CMAX]
    cdef int cstart[CMAX + 1]
    cdef int child_lab[CMAX]
    cdef int child_start[CMAX + 1]
    cdef int pos[CMAX]
    cdef uint64_t code[CMAX]
    cdef int parent[CMAX]
    cdef int explored[CMAX]
    cdef int nexp = 0
    cdef int i, j, c, target, a, b, v, w, x, g, rv, rx, ry, cnt, cmp
    cdef bint fixes, skip
    cdef uint64_t row, y
    memcpy(lab, lab_in, sizeof(int) * n)
    memcpy(cstart, cstart_in, sizeof(int) * (ncells + 1))
    ncells = _refine(st, lab, cstart, ncells)
    target = -1
    for c in range(ncells):
        if cstart[c + 1] - cstart[c] > 1:
            target = c
            break
    if target < 0:
        for i in range(n):
            pos[lab[i]] = i
        for i in range(n):
            row = 0
            y = st.out[lab[i]]
            while y:
                row |= (<uint64_t>1) << pos[lowbit(y)]
                y &= y - 1
            code[i] = row
        cmp = -1
        if st.have_best:
            cmp = 0
            for i in range(n):
                if code[i] != st.best[i]:
                    cmp = -1 if code[i] < st.best[i] else 1
                    break
        if cmp < 0:
            memcpy(st.best, code, sizeof(uint64_t) * n)
            memcpy(st.best_lab, lab, sizeof(int) * n)
            st.have_best = True
        elif cmp == 0 and st.nautos < MAX_AUTOS:
            for i in range(n):
                st.autos[st.nautos][lab[i]] = st.best_lab[i]
            st.nautos += 1
        return
    a = cstart[target]
    b = cstart[target + 1]
    for i in range(a, b):
        v = lab[i]
        if nexp > 0:
            for x in range(n):
                parent[x] = x
            for g in range(st.nautos):
                fixes = True
                for j in range(plen):
                    if st.autos[g][prefix[j]] != prefix[j]:
                        fixes = False
                        break
                if not fixes:
                    continue
                for x in range(n):
                    rx = _orbit_root(parent, x)
                    ry = _orbit_root(parent, st.autos[g][x])
                    if rx != ry:
                        parent[rx] = ry
            rv = _orbit_root(parent, v)
            skip = False
            for j in range(nexp):
                if _orbit_root(parent, explored[j]) == rv:
                    skip = True
                    break
            if skip:
                continue
        explored[nexp] = v
        nexp += 1
        # child partition: cells before target, [v], rest of target, cells after
        cnt = 0
        for j in range(a):
            child_lab[cnt] = lab[j]
            cnt += 1
        child_lab[cnt] = v
        cnt += 1
        for j in range(a, b):
            if lab[j] != v:
                child_lab[cnt] = lab[j]
                cnt += 1
        for j in range(b, n):
            child_lab[cnt] = lab[j]
            cnt += 1
        for c in range(target + 1):
            child_start[c] = cstart[c]
        child_start[target + 1] = a + 1
        for c in range(target + 1, ncells + 1):
            child_start[c + 1] = cstart[c]
        prefix[plen] = v
        _canon_search(st, child_lab, child_start, ncells + 1, prefix, plen + 1)


cdef tuple _canonical(CanonState *st, int n):
    cdef int lab[CMAX]
    cdef int cstart[CMAX + 1]
    cdef int prefix[CMAX]
    cdef int i
    st.n = n
    st.have_best = False
    st.nautos = 0
    for i in range(n):
        lab[i] = i
    cstart[0] = 0
    cstart[1] = n
    with nogil:
        _canon_search(st, lab, cstart, 1, prefix, 0)
    return tuple([st.best[i] for i in range(n)])


def canonical_label(int n, out_rows):
    """See ``_pykernels.canonical_label``."""
    if n == 0:
        return ()
    if n > MAX_CANON_N:
        raise ValueError("compiled canonical labelling limited to 32 vertices")
    cdef CanonState *st = <CanonState *>malloc(sizeof(CanonState))
    cdef int u
    cdef uint64_t y
    try:
        for u in range(n):
            st.out[u] = out_rows[u]
            st.inr[u] = 0
        for u in range(n):
            y = st.out[u]
            while y:
                st.inr[lowbit(y)] |= (<uint64_t>1) << u
                y &= y - 1
        return _canonical(st, n)
    finally:
        free(st)


def canonical_labels_of_orientations(int n, edges, int64_t start, int64_t stop):
    """Set of canonical codes over orientation indices [start, stop)."""
    if n > MAX_CANON_N:
        raise ValueError("compiled canonical labelling limited to 32 vertices")
    cdef CanonState *st = <CanonState *>malloc(sizeof(CanonState))
    cdef int m = len(edges)
    cdef int eu[512]
    cdef int ev[512]
    cdef int i, u
    cdef int64_t idx
    cdef uint64_t y
    cdef set labels = set()
    if m > 62:
        raise ValueError("too many edges")
    try:
        for i, (a, b) in enumerate(edges):
            eu[i] = a
            ev[i] = b
        idx = start
        while idx < stop:
            for u in range(n):
                st.out[u] = 0
                st.inr[u] = 0
            for i in range(m):
                if (idx >> i) & 1:
                    st.out[ev[i]] |= (<uint64_t>1) << eu[i]
                    st.inr[eu[i]] |= (<uint64_t>1) << ev[i]
                else:
                    st.out[eu[i]] |= (<uint64_t>1) << ev[i]
                    st.inr[ev[i]] |= (<uint64_t>1) << eu[i]
            labels.add(_canonical(st, n))
            idx += 1
        return labels
    finally:
        free(st)
