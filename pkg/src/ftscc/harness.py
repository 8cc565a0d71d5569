"""Differential verification against the static baseline, and timing runs."""

from __future__ import annotations

import gc
import random
import statistics
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

from .fault_index import FtSccIndex, preprocess, query
from .generators import strongly_connected
from .graph_core import DirectedGraph, FailureSet, SccPartition, tarjan_scc


def oracle_partition(
    g: DirectedGraph, f: FailureSet, insertions: Iterable[tuple[int, int]] = ()
) -> SccPartition:
    """Static SCCs of ``(G - F) + Y``, applying failures directly to the edge list.

    A failed vertex loses every incident edge, inserted ones included.
    """
    dead = f.vertices
    edges = [e for e in g.edges if e not in f.edges]
    edges.extend((u, v) for u, v in insertions)
    kept = [(u, v) for u, v in edges if u not in dead and v not in dead]
    return tarjan_scc(DirectedGraph(g.n, kept))


def random_failure_set(g: DirectedGraph, size: int, rng: random.Random) -> FailureSet:
    """Up to ``size`` failures, a random mix of edges and vertices."""
    n_edges = rng.randint(0, min(size, g.m))
    n_vertices = min(size - n_edges, g.n)
    return FailureSet.of(rng.sample(g.edges, n_edges), rng.sample(range(g.n), n_vertices))


def stratified_failure_set(g: DirectedGraph, size: int, i: int, rng: random.Random) -> FailureSet:
    """Failure set number ``i`` of a sweep that cycles through every edge/vertex split.

    Query ``i`` fails ``i mod (size + 1)`` edges and fills the rest with
    vertices, so sweeps of equal length share one composition whatever the
    graph. Vertex and edge failures can differ in cost by an order of
    magnitude, so this keeps timing comparisons across sizes fair.
    """
    n_edges = min(i % (size + 1), g.m)
    n_vertices = min(size - n_edges, g.n)
    return FailureSet.of(rng.sample(g.edges, n_edges), rng.sample(range(g.n), n_vertices))


def single_failures(g: DirectedGraph) -> Iterator[FailureSet]:
    for e in g.edges:
        yield FailureSet.of([e])
    for v in range(g.n):
        yield FailureSet.of(vertices=[v])


@dataclass
class DiffReport:
    checked: int = 0
    failed: int = 0
    first_counterexample: Optional[dict] = None

    @property
    def passed(self) -> int:
        return self.checked - self.failed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, f: FailureSet, got: SccPartition, want: SccPartition) -> None:
        self.checked += 1
        if got != want:
            self.failed += 1
            if self.first_counterexample is None:
                self.first_counterexample = {
                    "fail_edges": sorted(list(e) for e in f.edges),
                    "fail_vertices": sorted(f.vertices),
                    "index": [list(c) for c in got.components],
                    "oracle": [list(c) for c in want.components],
                }

    def merge(self, other: DiffReport) -> None:
        self.checked += other.checked
        self.failed += other.failed
        if self.first_counterexample is None:
            self.first_counterexample = other.first_counterexample

    def to_json(self) -> dict:
        out = {"checked": self.checked, "passed": self.passed, "failed": self.failed, "ok": self.ok}
        if self.first_counterexample is not None:
            out["first_counterexample"] = self.first_counterexample
        return out


def differential(ix: FtSccIndex, failure_sets: Iterable[FailureSet]) -> DiffReport:
    report = DiffReport()
    for f in failure_sets:
        report.record(f, query(ix, f), oracle_partition(ix.graph, f))
    return report


@dataclass
class BenchRow:
    n: int
    m: int
    k: int
    build_ms: float
    mean_query_ms: float
    p99_query_ms: float

    HEADER = "n,m,k,build_ms,mean_query_ms,p99_query_ms"

    def csv(self) -> str:
        return (
            f"{self.n},{self.m},{self.k},{self.build_ms:.3f},"
            f"{self.mean_query_ms:.3f},{self.p99_query_ms:.3f}"
        )


def _p99(values: Sequence[float]) -> float:
    if len(values) == 1:
        return values[0]
    return statistics.quantiles(values, n=100, method="inclusive")[98]


def bench_one(
    n: int,
    density: int,
    k: int,
    queries: int,
    seed: int,
    strategy: str = "trivial",
    repeats: int = 1,
) -> BenchRow:
    """Time one random strongly connected graph.

    Failure sets follow :func:`stratified_failure_set`; each query's time is
    the best of ``repeats`` runs.
    """
    rng = random.Random(seed * 1_000_003 + n)
    g = strongly_connected(n, density * n, rng)
    t0 = time.perf_counter()
    ix = preprocess(g, k, strategy)
    build_ms = (time.perf_counter() - t0) * 1e3
    times = []
    # like timeit, keep the collector from firing inside timed regions
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        for i in range(max(queries, 1)):
            f = stratified_failure_set(g, k, i, rng)
            best = float("inf")
            for _ in range(max(repeats, 1)):
                t0 = time.perf_counter()
                query(ix, f)
                best = min(best, time.perf_counter() - t0)
            times.append(best * 1e3)
            gc.collect()
    finally:
        if was_enabled:
            gc.enable()
    return BenchRow(n, g.m, k, build_ms, statistics.fmean(times), _p99(times))
