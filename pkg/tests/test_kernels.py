"""The compiled kernels and the pure-Python fallback must agree exactly."""

import itertools
import os
import random
import subprocess
import sys

import pytest

from dichroma import kernels
from dichroma._pykernels import orientation_rows
from dichroma.colouring import _tri_pairs, search_order
from dichroma.digraph import Digraph, triangles
from dichroma.planar import generate_triangulations

compiled = kernels.compiled_backend
python = kernels.python_backend
needs_c = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


def _random_digraph(rng, n, p=0.6):
    return Digraph(n, [(u, v) if rng.random() < 0.5 else (v, u)
                       for u, v in itertools.combinations(range(n), 2) if rng.random() < p])


def _solve_args(D, k, pre, tris):
    pre_list = [0] * D.n
    for v, c in pre.items():
        pre_list[v] = c
    return (D.n, list(D.out_rows), list(D.in_rows), k, search_order(D, sorted(pre)),
            pre_list, _tri_pairs(D.n, tris))


@needs_c
def test_backend_selected():
    assert kernels.BACKEND == compiled.BACKEND != python.BACKEND


@needs_c
def test_solve_parity():
    rng = random.Random(1)
    for _ in range(300):
        n = rng.randint(1, 9)
        D = _random_digraph(rng, n)
        k = rng.randint(1, 3)
        pre = {v: rng.randint(1, k) for v in rng.sample(range(n), rng.randint(0, min(2, n)))}
        tris = triangles(D) if rng.random() < 0.5 else []
        args = _solve_args(D, k, pre, tris)
        for find_all in (False, True):
            a = compiled.solve_colouring(*args, not pre and not find_all, find_all, 0)
            b = python.solve_colouring(*args, not pre and not find_all, find_all, 0)
            assert sorted(a[0]) == sorted(b[0])


@needs_c
def test_acyclic_table_parity():
    rng = random.Random(2)
    for _ in range(50):
        D = _random_digraph(rng, rng.randint(1, 10))
        assert bytes(compiled.acyclic_table(D.n, list(D.out_rows))) == \
            bytes(python.acyclic_table(D.n, list(D.out_rows)))


@needs_c
@pytest.mark.parametrize("statement", ["ii", "iii", "iv"])
def test_sweep_parity(statement):
    from dichroma.experiments import statement_sets
    for T in generate_triangulations(6):
        cons, checks = statement_sets(T, statement)
        edges = list(T.graph.edges)
        start, stop = 0, 600
        assert compiled.sweep_orientations(T.n, edges, start, stop, cons, checks) == \
            python.sweep_orientations(T.n, edges, start, stop, cons, checks)


@needs_c
def test_sweep_reports_failures_identically():
    # five vertices always hold a monochromatic triangle under two colours
    edges = list(itertools.combinations(range(5), 2))
    tris = list(itertools.combinations(range(5), 3))
    for start in (0, 17, 513):
        a = compiled.sweep_orientations(5, edges, start, 1 << 10, tris, tris)
        b = python.sweep_orientations(5, edges, start, 1 << 10, tris, tris)
        assert a == b and a[1] == start


@needs_c
def test_canonical_label_parity():
    rng = random.Random(3)
    for _ in range(300):
        D = _random_digraph(rng, rng.randint(1, 9), rng.random())
        assert compiled.canonical_label(D.n, list(D.out_rows)) == \
            python.canonical_label(D.n, list(D.out_rows))


@needs_c
def test_orientation_labels_parity():
    edges = list(itertools.combinations(range(5), 2))
    assert compiled.canonical_labels_of_orientations(5, edges, 0, 1 << 10) == \
        python.canonical_labels_of_orientations(5, edges, 0, 1 << 10)


def test_orientation_rows_match_arcs():
    edges = list(itertools.combinations(range(4), 2))
    for idx in range(64):
        D = Digraph(4, kernels.orientation_arcs(edges, idx))
        assert list(D.out_rows) == orientation_rows(4, edges, idx)


def test_pure_python_fallback_in_subprocess():
    env = dict(os.environ, DICHROMA_PURE_PYTHON="1")
    code = ("from dichroma import BACKEND, dichromatic_number\n"
            "from dichroma.colouring import tournament_classes\n"
            "assert BACKEND == 'python', BACKEND\n"
            "print(max(dichromatic_number(T) for T in tournament_classes(6)), len(tournament_classes(6)))\n")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.split() == ["2", "56"]
