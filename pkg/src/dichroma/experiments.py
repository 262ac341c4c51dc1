"""Corpus handling, partitioned verification sweeps and JSON reports."""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from dataclasses import dataclass, field
from importlib import resources
from multiprocessing import Pool
from pathlib import Path

from . import kernels
from .colouring import ColouringConstraints, find_colouring, merge_colourings, verify_colouring
from .digraph import Digraph, glue, triangles
from .planar import EmbeddedTriangulation, read_planar_code

CORPUS_ENV = "DICHROMA_CORPUS_DIR"
CHUNK = 1 << 16
STATEMENTS = ("ii", "iii", "iv")


# reports ---------------------------------------------------------------------

@dataclass
class Report:
    command: str
    parameters: dict
    outcome: str = "pass"
    counters: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    input_digest: str = ""
    seed: object = None
    wall_time: float = 0.0

    def to_json(self) -> str:
        return json.dumps({
            "command": self.command, "input_digest": self.input_digest,
            "parameters": self.parameters, "outcome": self.outcome,
            "counters": self.counters, "details": self.details,
            "seed": self.seed, "wall_time": round(self.wall_time, 6),
        }, sort_keys=True)


def digest(*chunks) -> str:
    h = hashlib.sha256()
    for c in chunks:
        h.update(c if isinstance(c, bytes) else str(c).encode())
    return h.hexdigest()


# corpus ------------------------------------------------------------------------

def corpus_files(path=None) -> list:
    """planar_code files from ``path``, $DICHROMA_CORPUS_DIR, or the packaged corpus."""
    if path is None and os.environ.get(CORPUS_ENV):
        path = os.environ[CORPUS_ENV]
    if path is None:
        base = resources.files("dichroma").joinpath("data")
        return sorted((p for p in base.iterdir() if p.name.endswith(".pc")), key=lambda p: p.name)
    path = Path(path)
    if path.is_dir():
        return sorted(path.glob("*.pc"))
    return [path]


def load_corpus(path=None, max_n=None):
    """(triangulations with n <= max_n, digest of the bytes read)."""
    out, h = [], hashlib.sha256()
    for f in corpus_files(path):
        data = f.read_bytes()
        h.update(data)
        out.extend(T for T in read_planar_code(data) if max_n is None or T.n <= max_n)
    out.sort(key=lambda T: T.n)
    return out, h.hexdigest()


# equivalence sweeps --------------------------------------------------------------

def statement_sets(T: EmbeddedTriangulation, statement: str):
    """(constrained triangles, triangles whose six patterns must all extend)."""
    facial = T.facial_triangles()
    if statement == "ii":
        return facial, []
    if statement == "iii":
        return facial, facial
    if statement == "iv":
        alltri = triangles(T.graph)
        return alltri, alltri
    raise ValueError(f"unknown statement {statement!r}")


def _sweep_task(task):
    ti, n, edges, cons, checks, start, stop = task
    checked, fail_idx, fail_set, missing = kernels.sweep_orientations(n, edges, start, stop, cons, checks)
    return ti, start, stop, checked, fail_idx, fail_set, missing


def _patterns(mask):
    return [[(p >> i) & 1 and 2 or 1 for i in range(3)] for p in range(8) if (mask >> p) & 1]


def verify_equivalence(triangulations, statement: str, jobs: int = 1, chunk: int = CHUNK) -> Report:
    """Check one statement for every orientation of every triangulation."""
    tasks = []
    per_tri = []
    for ti, T in enumerate(triangulations):
        cons, checks = statement_sets(T, statement)
        m = len(T.graph.edges)
        total = 1 << m
        per_tri.append((T, cons, checks, total))
        for start in range(0, total, chunk):
            tasks.append((ti, T.n, list(T.graph.edges), cons, checks, start, min(total, start + chunk)))
    report = Report("verify-equivalence", {"statement": statement, "jobs": jobs})
    t0 = time.perf_counter()
    if jobs > 1:
        with Pool(jobs) as pool:
            results = pool.map(_sweep_task, tasks)
    else:
        results = [_sweep_task(t) for t in tasks]
    orientations = instances = 0
    partitions = []
    failure = None
    for (ti, start, stop, checked, fail_idx, fail_set, missing) in results:
        T, cons, checks, _ = per_tri[ti]
        partitions.append({"triangulation": ti, "start": start, "stop": stop, "checked": checked})
        orientations += checked
        instances += checked * (6 * len(checks) if checks else 1)
        if fail_idx >= 0 and failure is None:
            arcs = kernels.orientation_arcs(T.graph.edges, fail_idx)
            failure = {"triangulation": ti, "n": T.n, "orientation_index": fail_idx,
                       "arcs": [list(a) for a in arcs]}
            if fail_set >= 0:
                failure["triangle"] = list(checks[fail_set])
                failure["missing_patterns"] = _patterns(missing)
    report.wall_time = time.perf_counter() - t0
    report.counters = {"triangulations": len(triangulations), "orientations": orientations,
                       "instances": instances, "partitions": partitions}
    expected = sum(total for *_, total in per_tri)
    if failure is not None:
        report.outcome = "fail"
        report.details = {"first_failure": failure}
    elif orientations != expected:
        report.outcome = "fail"
        report.details = {"error": f"checked {orientations} of {expected} orientations"}
    return report


# merges along shared tournaments -------------------------------------------------------------

@dataclass(frozen=True)
class MergeInstance:
    D1: Digraph
    D2: Digraph
    ident: dict
    c1: tuple
    c2: tuple
    k: int


def _random_with_tournament(rng, n, shared, tour_arcs, p):
    arcs = set(tour_arcs)
    S = set(shared)
    for u in range(n):
        for v in range(u + 1, n):
            if u in S and v in S:
                continue
            if rng.random() < p:
                arcs.add((u, v) if rng.random() < 0.5 else (v, u))
    return Digraph(n, arcs)


def random_merge_instance(rng: random.Random, max_n: int = 8) -> MergeInstance:
    """Two random digraphs overlapping in a random tournament, coloured to agree on it."""
    s = rng.randint(0, 4)
    n1, n2 = rng.randint(max(s, 1), max_n), rng.randint(max(s, 1), max_n)
    S1 = rng.sample(range(n1), s)
    S2 = rng.sample(range(n2), s)
    tour = []
    for i in range(s):
        for j in range(i + 1, s):
            tour.append((i, j) if rng.random() < 0.5 else (j, i))
    p = rng.uniform(0.2, 0.8)
    D1 = _random_with_tournament(rng, n1, S1, [(S1[a], S1[b]) for a, b in tour], p)
    D2 = _random_with_tournament(rng, n2, S2, [(S2[a], S2[b]) for a, b in tour], p)
    ident = {S2[i]: S1[i] for i in range(s)}
    k = 2
    while True:
        r1 = find_colouring(D1, ColouringConstraints(k=k))
        if r1.found:
            pre = {a: r1.colouring[b] for a, b in ident.items()}
            r2 = find_colouring(D2, ColouringConstraints(k=k, pre=pre))
            if r2.found:
                return MergeInstance(D1, D2, ident, r1.colouring, r2.colouring, k)
        k += 1


def check_merge_instance(inst: MergeInstance) -> bool:
    merged = merge_colourings(inst.D1, inst.c1, inst.D2, inst.c2, inst.ident)
    D = glue(inst.D1, inst.D2, inst.ident)
    return verify_colouring(D, merged, ColouringConstraints(k=inst.k))


def merge_suite(count: int, seed: int) -> Report:
    rng = random.Random(seed)
    t0 = time.perf_counter()
    ok = 0
    first_bad = None
    for i in range(count):
        inst = random_merge_instance(rng)
        if check_merge_instance(inst):
            ok += 1
        elif first_bad is None:
            first_bad = {"instance": i, "D1": [list(a) for a in inst.D1.arcs],
                         "D2": [list(a) for a in inst.D2.arcs],
                         "ident": sorted(inst.ident.items())}
    rep = Report("merge-demo", {"count": count}, seed=seed)
    rep.counters = {"instances": count, "verified": ok}
    rep.outcome = "pass" if ok == count else "fail"
    if first_bad:
        rep.details = {"first_failure": first_bad}
    rep.wall_time = time.perf_counter() - t0
    return rep
