from __future__ import annotations

import json
import random
from itertools import combinations

import pytest

from ftscc.errors import ContractError, FtrsBudgetExceeded
from ftscc.ftrs import (
    Ftrs,
    ftrs_provider,
    greedy_sparse_ftrs,
    trivial_ftrs,
    verify_ftrs,
)
from ftscc.generators import gnp, strongly_connected
from ftscc.graph_core import DirectedGraph, induced_subgraph, reach_from, reverse

from conftest import bfs_reach


def definitional_valid(host, edges, s, k):
    """Slow restatement of the k-FTRS definition over explicit edge lists."""
    for size in range(k + 1):
        for f in combinations(host.edges, size):
            if bfs_reach(host.n, host.edges, s, f) != bfs_reach(host.n, edges, s, f):
                return False
    return True


def minimal_valid_subsets(host, s, k):
    """Inclusion-minimal edge subsets satisfying the definition, by brute force."""
    valid = [
        frozenset(sub)
        for r in range(host.m + 1)
        for sub in combinations(host.edges, r)
        if definitional_valid(host, list(sub), s, k)
    ]
    return {a for a in valid if not any(b < a for b in valid)}


def doubled_routes():
    # 0 reaches 1 through 2 and through 3
    return DirectedGraph(4, [(0, 2), (2, 1), (0, 3), (3, 1)])


class TestTrivial:
    def test_is_host(self, c3):
        h = trivial_ftrs(c3, 0, 2)
        assert h.subgraph is c3
        assert verify_ftrs(c3, h).valid

    def test_single_vertex(self):
        g = DirectedGraph(1)
        h = trivial_ftrs(g, 0, 1)
        assert h.edge_count == 0 and verify_ftrs(g, h).valid

    def test_rejects_bad_source(self, c3):
        with pytest.raises(ContractError):
            trivial_ftrs(c3, 3, 1)

    def test_random_hosts_verify(self):
        rng = random.Random(6)
        for _ in range(30):
            g = gnp(rng.randint(1, 8), 0.3, rng)
            h = trivial_ftrs(g, 0, 2)
            assert set(h.subgraph.edges) == set(g.edges)
            assert verify_ftrs(g, h).valid


class TestGreedy:
    def test_cycle_drops_closing_edge(self, c3):
        # The edge back into the source never matters for reachability from it.
        h = greedy_sparse_ftrs(c3, 0, 1)
        assert h.subgraph.edges == ((0, 1), (1, 2))
        assert frozenset(h.subgraph.edges) in minimal_valid_subsets(c3, 0, 1)

    def test_doubled_routes_are_both_kept(self):
        g = doubled_routes()
        h = greedy_sparse_ftrs(g, 0, 1)
        assert set(h.subgraph.edges) == set(g.edges)
        assert verify_ftrs(g, h).valid

    def test_redundant_routes_pruned_for_k1(self):
        # three parallel routes; one failure can only cut one of them
        g = DirectedGraph(5, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])
        h = greedy_sparse_ftrs(g, 0, 1)
        assert h.edge_count < g.m
        assert verify_ftrs(g, h).valid

    def test_edgeless(self):
        g = DirectedGraph(3)
        assert greedy_sparse_ftrs(g, 0, 1).edge_count == 0

    def test_matches_minimal_oracle_on_small_hosts(self):
        rng = random.Random(21)
        for _ in range(25):
            g = gnp(rng.randint(1, 5), 0.4, rng)
            if g.m > 9:
                continue
            h = greedy_sparse_ftrs(g, 0, 1)
            assert frozenset(h.subgraph.edges) in minimal_valid_subsets(g, 0, 1)

    def test_always_verifies(self):
        rng = random.Random(13)
        for _ in range(30):
            n = rng.randint(2, 10)
            g = strongly_connected(n, rng.randint(n, 2 * n), rng)
            k = rng.randint(1, 2)
            h = greedy_sparse_ftrs(g, rng.randrange(n), k)
            report = verify_ftrs(g, h)
            assert report.valid
            assert definitional_valid(g, h.subgraph.edges, h.source, k)

    def test_budget_error_advises_trivial(self):
        g = strongly_connected(40, 200, random.Random(0))
        with pytest.raises(FtrsBudgetExceeded, match="trivial"):
            greedy_sparse_ftrs(g, 0, 2, budget=1000)


class TestVerify:
    def test_cycle_without_closing_edge_is_valid(self, c3):
        sub = DirectedGraph(3, [(0, 1), (1, 2)])
        report = verify_ftrs(c3, Ftrs(0, 1, sub, c3))
        assert report.valid == definitional_valid(c3, sub.edges, 0, 1)
        assert report.valid

    def test_missing_single_edge(self):
        host = DirectedGraph(2, [(0, 1)])
        report = verify_ftrs(host, Ftrs(0, 1, DirectedGraph(2), host))
        assert not report.valid
        assert report.counterexample == ((), 1)

    def test_extra_edge_is_invalid(self):
        host = DirectedGraph(2)
        report = verify_ftrs(host, Ftrs(0, 1, DirectedGraph(2, [(0, 1)]), host))
        assert not report.valid

    def test_json(self):
        host = DirectedGraph(2, [(0, 1)])
        report = verify_ftrs(host, Ftrs(0, 1, DirectedGraph(2), host))
        assert json.loads(report.dumps()) == {
            "valid": False,
            "edge_count": 0,
            "max_in_degree": 0,
            "counterexample": {"failures": [], "vertex": 1},
        }
        ok = verify_ftrs(host, trivial_ftrs(host, 0, 1)).to_json()
        assert ok == {"valid": True, "edge_count": 1, "max_in_degree": 1}

    def test_agrees_with_definition_on_random_subgraphs(self):
        rng = random.Random(17)
        for _ in range(60):
            g = gnp(rng.randint(1, 6), 0.4, rng)
            kept = [e for e in g.edges if rng.random() < 0.7]
            report = verify_ftrs(g, Ftrs(0, 1, DirectedGraph(g.n, kept), g))
            assert report.valid == definitional_valid(g, kept, 0, 1)
            if not report.valid:
                f, v = report.counterexample
                assert (v in bfs_reach(g.n, g.edges, 0, f)) != (v in bfs_reach(g.n, kept, 0, f))


class TestProvider:
    def test_trivial_pairs(self, c3):
        pairs = ftrs_provider("trivial", c3, [0, 1, 2], 1)
        assert sorted(pairs) == [0, 1, 2]
        for s, pair in pairs.items():
            assert pair.fwd.subgraph == c3 and pair.bwd.subgraph == reverse(c3)
            assert pair.source == s

    def test_empty_sources(self, c3):
        assert ftrs_provider("greedy", c3, [], 1) == {}

    def test_unknown_strategy(self, c3):
        with pytest.raises(ContractError):
            ftrs_provider("magic", c3, [0], 1)

    def test_greedy_pairs_verify_both_directions(self):
        rng = random.Random(31)
        for _ in range(10):
            n = rng.randint(2, 10)
            g = strongly_connected(n, rng.randint(n, 2 * n), rng)
            for pair in ftrs_provider("greedy", g, range(n), 1).values():
                assert verify_ftrs(g, pair.fwd).valid
                assert verify_ftrs(reverse(g), pair.bwd).valid


def successor_closed(g, d):
    return reach_from(g, d)


def test_restriction_to_closed_sets_stays_valid():
    rng = random.Random(41)
    checked = 0
    while checked < 40:
        n = rng.randint(2, 10)
        g = gnp(n, 0.3, rng)
        if g.m > 14:
            continue
        s = rng.randrange(n)
        d = rng.randrange(n)
        dead = successor_closed(g, d)
        if s in dead:
            continue
        # any s-path that enters `dead` can never return, so A is closed
        a = sorted(set(range(n)) - dead)
        k = rng.randint(1, 2)
        h = greedy_sparse_ftrs(g, s, k)
        host_a = induced_subgraph(g, a)
        h_a = induced_subgraph(h.subgraph, a)
        local_s = host_a.to_local[s]
        assert verify_ftrs(host_a.graph, Ftrs(local_s, k, h_a.graph, host_a.graph)).valid
        checked += 1
