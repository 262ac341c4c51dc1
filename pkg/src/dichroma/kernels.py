"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the pure-Python
twin is.  Set ``DICHROMA_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

python_backend = _pykernels
compiled_backend = None

if os.environ.get("DICHROMA_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

_impl = compiled_backend if compiled_backend is not None else _pykernels
BACKEND = _impl.BACKEND

_C_SOLVE_MAX = 64
_C_SWEEP_MAX = 24
_C_CANON_MAX = 32


def solve_colouring(n, out_rows, in_rows, k, order, pre, tri_pairs,
                    break_symmetry=True, find_all=False, node_limit=0):
    impl = _impl if n <= _C_SOLVE_MAX else _pykernels
    return impl.solve_colouring(n, out_rows, in_rows, k, order, pre, tri_pairs,
                                break_symmetry, find_all, node_limit)


def acyclic_table(n, out_rows):
    impl = _impl if n <= _C_SWEEP_MAX else _pykernels
    return impl.acyclic_table(n, out_rows)


def sweep_orientations(n, edges, start, stop, cons_tris, check_sets):
    impl = _impl if n <= _C_SWEEP_MAX else _pykernels
    return impl.sweep_orientations(n, edges, start, stop, cons_tris, check_sets)


def canonical_label(n, out_rows):
    impl = _impl if n <= _C_CANON_MAX else _pykernels
    return impl.canonical_label(n, out_rows)


def canonical_labels_of_orientations(n, edges, start, stop):
    impl = _impl if n <= _C_CANON_MAX and len(edges) <= 62 else _pykernels
    return impl.canonical_labels_of_orientations(n, edges, start, stop)


orientation_rows = _pykernels.orientation_rows


def orientation_arcs(edges, idx):
    """Arcs of orientation ``idx``: bit i set reverses edges[i]."""
    return [(v, u) if (idx >> i) & 1 else (u, v) for i, (u, v) in enumerate(edges)]
