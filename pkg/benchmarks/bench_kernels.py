"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each workload runs on both backends; results are checked equal before timing.
"""

import argparse
import itertools
import random
import timeit

from dichroma import kernels
from dichroma.colouring import _tri_pairs, search_order, tournament_classes
from dichroma.digraph import Digraph, complete_graph, triangles
from dichroma.experiments import statement_sets
from dichroma.planar import generate_triangulations


def solve_workload(backend):
    tours = tournament_classes(7)

    def run():
        out = []
        for D in tours:
            order = search_order(D)
            out.append(backend.solve_colouring(7, list(D.out_rows), list(D.in_rows), 2, order,
                                               [0] * 7, [[] for _ in range(7)], True, False, 0)[0])
        return out
    return run


def enumerate_workload(backend):
    rng = random.Random(0)
    n = 12
    D = Digraph(n, [(u, v) if rng.random() < 0.5 else (v, u)
                    for u, v in itertools.combinations(range(n), 2) if rng.random() < 0.4])
    tris = _tri_pairs(n, triangles(D))

    def run():
        return backend.solve_colouring(n, list(D.out_rows), list(D.in_rows), 2, search_order(D),
                                       [0] * n, tris, False, True, 0)[0]
    return run


def sweep_workload(backend):
    T = generate_triangulations(6)[1]
    cons, checks = statement_sets(T, "iv")
    edges = list(T.graph.edges)

    def run():
        return backend.sweep_orientations(T.n, edges, 0, 1 << 12, cons, checks)
    return run


def canon_workload(backend):
    edges = complete_graph(5).edges

    def run():
        return backend.canonical_labels_of_orientations(5, list(edges), 0, 1 << 10)
    return run


WORKLOADS = {
    "solve: 2-colour the 456 tournaments on 7 vertices": solve_workload,
    "enumerate: all 2-colourings, random 12-vertex digraph": enumerate_workload,
    "sweep: statement (iv), 4096 orientations of a 6-vertex triangulation": sweep_workload,
    "canonical labels: 1024 orientations of K5": canon_workload,
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.compiled_backend is None:
        print("compiled extension not built; only the Python backend is available")
        return 1
    backends = {"cython": kernels.compiled_backend, "python": kernels.python_backend}
    print(f"{'workload':<72} {'cython s':>9} {'python s':>9} {'speedup':>8}")
    for name, make in WORKLOADS.items():
        fns = {b: make(mod) for b, mod in backends.items()}
        a, b = fns["cython"](), fns["python"]()
        assert sorted(map(str, a)) == sorted(map(str, b)) if isinstance(a, list) else a == b, name
        times = {b: min(timeit.repeat(f, number=1, repeat=args.repeat)) for b, f in fns.items()}
        print(f"{name:<72} {times['cython']:>9.4f} {times['python']:>9.4f} "
              f"{times['python'] / times['cython']:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
