"""Command-line interface: one JSON report per line on stdout, summaries on stderr."""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from . import kernels
from .colouring import (ColouringConstraints, dichromatic_number, find_colouring,
                        max_dichromatic_over_orientations, verify_colouring)
from .digraph import Digraph, parse_digraph, parse_graph
from .errors import (BudgetExceeded, DichromaError, HasK5Minor, NoGadgetFound,
                     OracleFailure, ParseError)
from .experiments import (STATEMENTS, Report, digest, load_corpus, merge_suite,
                          verify_equivalence)
from .gadgets import (build_T_delta, build_T_star, derive_precolour_extensions,
                      find_blocking_octahedron, is_blocking, load_gadget,
                      tdelta_restriction_violations, transitive_labelling)
from .minors import (embed_triangulation, search_k33free_counterexample,
                     structured_colouring, wagner_decompose)
from .planar import OrientedTriangulation

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET, EXIT_K5 = 0, 1, 2, 3, 4


def _emit(report: Report, summary: str):
    print(report.to_json())
    print(summary, file=sys.stderr)
    return EXIT_OK if report.outcome in ("pass", "found", "none") else EXIT_VIOLATION


def _read(path):
    data = Path(path).read_bytes()
    return data, data.decode()


def _parse_pre(text):
    pre = {}
    for item in text.split(","):
        v, c = item.split(":")
        pre[int(v)] = int(c)
    return pre


def _oriented_triangulation(text):
    D = parse_digraph(text)
    return OrientedTriangulation(embed_triangulation(D.underlying()), D)


# verbs -----------------------------------------------------------------------------

def cmd_chi(args):
    raw, text = _read(args.input)
    t0 = time.perf_counter()
    if args.all_orientations:
        G = parse_graph(text)
        res = max_dichromatic_over_orientations(G, mod_iso=args.mod_iso, max_edges=args.max_edges)
        rep = Report("chi", {"all_orientations": True, "mod_iso": args.mod_iso},
                     counters={"instances": res.instances},
                     details={"chi": res.value, "witness_arcs": [list(a) for a in res.witness.arcs]})
        value = res.value
    else:
        D = parse_digraph(text)
        value = dichromatic_number(D)
        rep = Report("chi", {"all_orientations": False}, counters={"instances": 1},
                     details={"chi": value})
    rep.input_digest = digest(raw)
    rep.wall_time = time.perf_counter() - t0
    return _emit(rep, f"chi = {value}")


def cmd_verify_equivalence(args):
    tris, dig = load_corpus(args.corpus, args.max_n)
    rep = verify_equivalence(tris, args.statement, jobs=args.jobs)
    rep.input_digest = dig
    rep.parameters["max_n"] = args.max_n
    c = rep.counters
    return _emit(rep, f"statement ({args.statement}): {rep.outcome}; "
                      f"{c['triangulations']} triangulations, {c['orientations']} orientations, "
                      f"{c['instances']} instances")


def cmd_gadget(args):
    t0 = time.perf_counter()
    if args.action == "find-octahedron":
        g = find_blocking_octahedron()
        text = g.to_text()
        if args.out:
            Path(args.out).write_text(text)
        rep = Report("gadget", {"action": args.action},
                     outcome="pass" if is_blocking(g.orientation, g.outer) else "fail",
                     details={"fixture": text, "outer": list(g.outer),
                              "matches_pinned": g == load_gadget()})
        summary = f"blocking octahedron with outer face {g.outer}"
    else:
        if not args.input:
            raise ParseError("this action needs an input digraph")
        raw, text = _read(args.input)
        OT = _oriented_triangulation(text)
        rep = Report("gadget", {"action": args.action}, input_digest=digest(raw))
        if args.action == "build-tdelta":
            TD = build_T_delta(OT)
            bad = tdelta_restriction_violations(OT, TD, "facial")
            sep = tdelta_restriction_violations(OT, TD, "all")
            transitive = sum(1 for f in OT.embedding.facial_triangles()
                             if transitive_labelling(OT.orientation, f))
            rep.outcome = "pass" if not bad and TD.n == OT.n + 3 * transitive else "fail"
            rep.details = {"n": OT.n, "n_tdelta": TD.n, "transitive_faces": transitive,
                           "facial_violations": bad, "triangles_possibly_monochromatic": sep}
            summary = f"T-delta on {TD.n} vertices, facial violations: {len(bad)}"
        else:
            face = tuple(args.face) if args.face else OT.embedding.facial_triangles()[0]
            if args.action == "build-tstar":
                lab = transitive_labelling(OT.orientation, face)
                if lab is None:
                    raise ParseError(f"face {face} is not transitively oriented")
                ts = build_T_star(OT, lab)
                S = ts.triangulation.orientation
                frame = ts.frame_arcs()
                o = ts.outer
                checks = {
                    "vertex_count": ts.triangulation.n == 3 * OT.n - 5,
                    "centre_is_frame_source": all(S.has_arc(ts.centre, x) for x in o),
                    "outer_cyclic": all(S.has_arc(o[i], o[(i + 1) % 3]) for i in range(3)),
                    "frame_present": all(S.has_arc(a, b) for a, b in frame),
                }
                rep.outcome = "pass" if all(checks.values()) else "fail"
                rep.details = {"labelling": list(lab), "n_tstar": ts.triangulation.n, "checks": checks}
                summary = f"T* on {ts.triangulation.n} vertices: {rep.outcome}"
            else:
                table = derive_precolour_extensions(OT, face)
                rep.details = {"triangle": list(table.triangle),
                               "directed": transitive_labelling(OT.orientation, face) is None,
                               "entries": {"".join(map(str, k)): list(v) for k, v in sorted(table.entries.items())},
                               "routes": {"".join(map(str, k)): r for k, r in sorted(table.routes.items())}}
                rep.outcome = "pass" if len(table) == 6 else "fail"
                summary = f"extension table for {table.triangle}: {len(table)} entries"
    rep.wall_time = time.perf_counter() - t0
    return _emit(rep, summary)


def cmd_decompose(args):
    raw, text = _read(args.input)
    G = parse_graph(text)
    t0 = time.perf_counter()
    try:
        tree = wagner_decompose(G, split_clique_separators=args.split_cliques)
    except HasK5Minor as exc:
        rep = Report("decompose", {"split_cliques": args.split_cliques}, outcome="fail",
                     input_digest=digest(raw), details={"k5_minor": exc.witness.to_json()})
        rep.wall_time = time.perf_counter() - t0
        _emit(rep, "graph has a K5 minor")
        return EXIT_K5
    rep = Report("decompose", {"split_cliques": args.split_cliques}, input_digest=digest(raw),
                 details={"tree": tree.to_json()})
    rep.wall_time = time.perf_counter() - t0
    return _emit(rep, "decomposition recomposes exactly")


def cmd_colour(args):
    raw, text = _read(args.input)
    if args.random_orientation:
        if args.seed is None:
            raise ParseError("--random-orientation needs --seed")
        G = parse_graph(text)
        rng = random.Random(args.seed)
        D = Digraph(G.n, kernels.orientation_arcs(G.edges, rng.getrandbits(len(G.edges))))
    else:
        D = parse_digraph(text)
    pre = _parse_pre(args.pre)
    t0 = time.perf_counter()
    c = structured_colouring(D, pre)
    ok = verify_colouring(D, c, ColouringConstraints(k=2, pre=pre, forbid_mono_triangles=True))
    direct = find_colouring(D, ColouringConstraints(k=2, pre=pre, forbid_mono_triangles=True)).found
    rep = Report("colour", {"pre": sorted(pre.items()), "random_orientation": args.random_orientation},
                 outcome="pass" if ok and direct else "fail", input_digest=digest(raw),
                 seed=args.seed, details={"arcs": [list(a) for a in D.arcs], "colouring": list(c),
                                          "direct_solver_agrees": direct})
    rep.wall_time = time.perf_counter() - t0
    return _emit(rep, f"colouring {''.join(map(str, c))}")


def cmd_search_k33(args):
    t0 = time.perf_counter()
    hit = search_k33free_counterexample(args.budget, args.seed)
    rep = Report("search-k33", {"budget": args.budget}, seed=args.seed,
                 outcome="found" if hit else "none",
                 details=hit.to_json() if hit else {})
    rep.wall_time = time.perf_counter() - t0
    return _emit(rep, f"K3,3-minor-free orientation needing 3 colours: {'found' if hit else 'none'}")


def cmd_merge_demo(args):
    rep = merge_suite(args.count, args.seed)
    c = rep.counters
    return _emit(rep, f"{c['verified']}/{c['instances']} merged colourings verify")


# parser ------------------------------------------------------------------------------

def build_parser():
    ap = argparse.ArgumentParser(prog="dichroma", description=__doc__)
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("chi", help="dichromatic number of a digraph, or of a graph over its orientations")
    p.add_argument("input")
    p.add_argument("--all-orientations", action="store_true", help="read an undirected graph")
    p.add_argument("--mod-iso", action="store_true", help="one tournament per isomorphism class")
    p.add_argument("--max-edges", type=int, default=24)
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("verify-equivalence", help="check a statement over a triangulation corpus")
    p.add_argument("--corpus", help="planar_code file or directory")
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--statement", choices=STATEMENTS, default="iv")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify_equivalence)

    p = sub.add_parser("gadget", help="gadget constructions")
    p.add_argument("action", choices=["find-octahedron", "build-tdelta", "build-tstar", "extension-table"])
    p.add_argument("input", nargs="?", help="oriented triangulation in digraph text format")
    p.add_argument("--face", type=int, nargs=3)
    p.add_argument("--out", help="fixture path for find-octahedron")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("decompose", help="clique-sum decomposition of a K5-minor-free graph")
    p.add_argument("input")
    p.add_argument("--split-cliques", action="store_true",
                   help="also cut planar and V8 parts at separating cliques")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("colour", help="2-colouring along the decomposition, extending a pre-colouring")
    p.add_argument("input")
    p.add_argument("--pre", required=True, help="e.g. 0:1,1:2")
    p.add_argument("--random-orientation", action="store_true", help="read a graph and orient it at random")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_colour)

    p = sub.add_parser("search-k33", help="look for a K3,3-minor-free orientation needing 3 colours")
    p.add_argument("--budget", type=int, default=10 ** 6)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_search_k33)

    p = sub.add_parser("merge-demo", help="random merges of colourings along shared tournaments")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_merge_demo)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (OracleFailure, NoGadgetFound) as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except DichromaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
