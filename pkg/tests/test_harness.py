from __future__ import annotations

import random

from ftscc.fault_index import preprocess
from ftscc.generators import gnp, random_path_in_tree, random_tree_graph, strongly_connected
from ftscc.graph_core import FailureSet, tarjan_scc
from ftscc.harness import (
    DiffReport,
    bench_one,
    differential,
    oracle_partition,
    random_failure_set,
    single_failures,
    stratified_failure_set,
)

from conftest import closure_partition, oracle_sccs


def test_strongly_connected_generator():
    rng = random.Random(0)
    for n in (2, 5, 30):
        g = strongly_connected(n, 3 * n, rng)
        assert g.m == min(3 * n, n * (n - 1))
        assert len(tarjan_scc(g).components) == 1


def test_tree_path_is_downward():
    rng = random.Random(1)
    g = random_tree_graph(50, rng)
    parent = [None] + [next(u for u in g.in_adj[v]) for v in range(1, 50)]
    for _ in range(20):
        path = random_path_in_tree(parent, rng)
        assert all(parent[b] == a for a, b in zip(path, path[1:]))


def test_oracle_partition_agrees_with_closure():
    rng = random.Random(2)
    for _ in range(50):
        g = gnp(rng.randint(1, 10), 0.3, rng)
        f = random_failure_set(g, 3, rng)
        ins = [(rng.randrange(g.n), rng.randrange(g.n)) for _ in range(2)]
        got = oracle_partition(g, f, ins).components
        assert got == oracle_sccs(g, f.edges, f.vertices, ins)


def test_random_failure_set_respects_size():
    rng = random.Random(3)
    g = strongly_connected(10, 30, rng)
    for _ in range(100):
        f = random_failure_set(g, 3, rng)
        assert len(f) <= 3
        assert all(e in g.edge_set for e in f.edges)


def test_stratified_sets_cycle_through_mixes():
    rng = random.Random(4)
    g = strongly_connected(20, 60, rng)
    mixes = [len(stratified_failure_set(g, 2, i, rng).edges) for i in range(6)]
    assert mixes == [0, 1, 2, 0, 1, 2]
    assert all(len(stratified_failure_set(g, 2, i, rng)) == 2 for i in range(6))


def test_single_failures_count():
    g = strongly_connected(6, 12, random.Random(5))
    assert len(list(single_failures(g))) == g.m + g.n


def test_diff_report_keeps_first_counterexample():
    g = strongly_connected(5, 10, random.Random(6))
    ix = preprocess(g, 1)
    report = differential(ix, single_failures(g))
    assert report.ok and report.checked == g.m + g.n
    bad = DiffReport()
    whole = tarjan_scc(g)
    split = FailureSet.of(vertices=[0])
    bad.record(split, whole, oracle_partition(g, split))
    bad.record(split, whole, oracle_partition(g, split))
    assert bad.failed == 2 and bad.first_counterexample["fail_vertices"] == [0]
    merged = DiffReport()
    merged.merge(report)
    merged.merge(bad)
    assert merged.to_json()["failed"] == 2 and "first_counterexample" in merged.to_json()


def test_bench_row_shape():
    row = bench_one(30, 4, 2, queries=3, seed=0)
    assert (row.n, row.m, row.k) == (30, 120, 2)
    assert row.csv().count(",") == 5
    assert row.p99_query_ms >= 0


def test_closure_oracle_on_cycle(c3):
    assert closure_partition(3, c3.edges) == ((0, 1, 2),)
