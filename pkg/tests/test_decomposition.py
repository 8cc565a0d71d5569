from __future__ import annotations

import math
import random

import pytest

from ftscc.decomposition import (
    DfsTree,
    ancestor_paths_count,
    build_dfs_tree,
    heavy_path_decompose,
)
from ftscc.errors import ContractError
from ftscc.generators import random_tree_graph, strongly_connected
from ftscc.graph_core import DirectedGraph


def chain(n):
    return DfsTree.from_children(0, [[v + 1] if v + 1 < n else [] for v in range(n)])


def complete_binary(n):
    return DfsTree.from_children(0, [[c for c in (2 * v + 1, 2 * v + 2) if c < n] for v in range(n)])


def brute_ancestor_paths(d, t, v):
    """Count heads lying on the root-to-v path by walking every ancestor."""
    heads = {p.head for p in d.paths}
    count = 0
    x = v
    while x is not None:
        count += x in heads
        x = t.parent[x]
    return count


def random_tree(n, rng):
    # alternate bushy and stringy shapes so deep trees get exercised too
    if rng.random() < 0.5:
        children = [[] for _ in range(n)]
        for v in range(1, n):
            children[rng.randrange(v)].append(v)
    else:
        children = [[] for _ in range(n)]
        for v in range(1, n):
            children[rng.randrange(max(0, v - 3), v)].append(v)
    return DfsTree.from_children(0, children)


class TestBuildDfsTree:
    def test_cycle_gives_chain(self, c3):
        t = build_dfs_tree(c3, 0)
        assert t.parent == (None, 0, 1)
        assert t.depth == (0, 1, 2)
        assert t.subtree_size == (3, 2, 1)

    def test_star(self):
        n = 6
        edges = [(0, i) for i in range(1, n)] + [(i, 0) for i in range(1, n)]
        t = build_dfs_tree(DirectedGraph(n, edges), 0)
        assert t.children[0] == tuple(range(1, n))
        assert all(t.subtree_size[i] == 1 for i in range(1, n))

    def test_unreachable_vertex_is_named(self):
        with pytest.raises(ContractError, match="vertex 2"):
            build_dfs_tree(DirectedGraph(3, [(0, 1)]), 0)

    def test_intervals_nest_and_sizes_add_up(self):
        g = strongly_connected(20, 50, random.Random(5))
        t = build_dfs_tree(g, 0)
        for a in range(20):
            assert t.visit_time[a] < t.finish_time[a]
            for b in range(20):
                ia = (t.visit_time[a], t.finish_time[a])
                ib = (t.visit_time[b], t.finish_time[b])
                disjoint = ia[1] < ib[0] or ib[1] < ia[0]
                nested = (ia[0] <= ib[0] and ib[1] <= ia[1]) or (ib[0] <= ia[0] and ia[1] <= ib[1])
                assert disjoint or nested
        for v in range(20):
            assert t.subtree_size[v] == 1 + sum(t.subtree_size[c] for c in t.children[v])
            if t.parent[v] is not None:
                assert g.has_edge(t.parent[v], v)
        assert t.subtree_size[0] == 20

    def test_children_in_ascending_order(self):
        g = strongly_connected(30, 90, random.Random(9))
        t = build_dfs_tree(g, 0)
        assert all(list(c) == sorted(c) for c in t.children)

    def test_recursive_tree_is_reproduced(self):
        rng = random.Random(2)
        g = random_tree_graph(200, rng)
        t = build_dfs_tree(g, 0)
        assert {(t.parent[v], v) for v in range(1, 200)} == set(g.edges)


class TestHeavyPaths:
    def test_chain(self):
        d = heavy_path_decompose(chain(5))
        assert len(d.paths) == 1 and len(d.paths[0]) == 5
        assert all(ancestor_paths_count(d, chain(5), v) == 1 for v in range(5))

    def test_single_vertex(self):
        t = chain(1)
        d = heavy_path_decompose(t)
        assert [p.vertices for p in d.paths] == [(0,)]
        assert ancestor_paths_count(d, t, 0) == 1

    def test_binary_tree_of_seven(self):
        t = complete_binary(7)
        d = heavy_path_decompose(t)
        assert len(d.paths) == 4
        for leaf in range(3, 7):
            assert brute_ancestor_paths(d, t, leaf) <= 3
            assert ancestor_paths_count(d, t, leaf) == brute_ancestor_paths(d, t, leaf)

    def test_binary_tree_of_fifteen(self):
        t = complete_binary(15)
        d = heavy_path_decompose(t)
        assert max(brute_ancestor_paths(d, t, v) for v in range(15)) <= 4

    def test_ties_go_to_smallest_id(self):
        d = heavy_path_decompose(complete_binary(3))
        assert d.paths[0].vertices == (0, 1)

    def test_dump_format(self):
        d = heavy_path_decompose(complete_binary(7))
        lines = d.dump().splitlines()
        assert lines[0] == "depth=0 head=0 tail=3 len=3"
        assert len(lines) == 4

    def test_invariants_on_random_trees(self):
        rng = random.Random(11)
        for _ in range(50):
            n = rng.randint(1, 300)
            t = random_tree(n, rng)
            d = heavy_path_decompose(t)
            seen = [v for p in d.paths for v in p.vertices]
            assert sorted(seen) == list(range(n))
            keys = [(p.depth, p.head) for p in d.paths]
            assert keys == sorted(keys)
            for p in d.paths:
                assert p.depth == t.depth[p.head]
                assert not t.children[p.tail]
                for a, b in zip(p.vertices, p.vertices[1:]):
                    assert t.parent[b] == a
                    assert all(
                        (t.subtree_size[b], -b) >= (t.subtree_size[c], -c) for c in t.children[a]
                    )

    def test_ancestor_path_bound_on_random_trees(self):
        rng = random.Random(3)
        for _ in range(100):
            n = rng.randint(1, 2048)
            t = random_tree(n, rng)
            d = heavy_path_decompose(t)
            bound = math.floor(math.log2(n)) + 1
            counts = [ancestor_paths_count(d, t, v) for v in range(n)]
            assert max(counts) <= bound
            assert ancestor_paths_count(d, t, t.root) == 1

    def test_first_path_removal_halves_subtrees(self):
        rng = random.Random(4)
        for _ in range(100):
            n = rng.randint(1, 2048)
            t = random_tree(n, rng)
            first = heavy_path_decompose(t).paths[0]
            on_path = set(first.vertices)
            for v in first.vertices:
                for c in t.children[v]:
                    if c not in on_path:
                        assert t.subtree_size[c] <= n / 2


def simple_paths(g, a, b, limit=20000):
    out = []
    stack = [(a, (a,))]
    while stack and len(out) < limit:
        v, path = stack.pop()
        if v == b:
            out.append(path)
            continue
        for w in g.out_adj[v]:
            if w not in path:
                stack.append((w, path + (w,)))
    return out


def test_cross_paths_pass_through_common_ancestor():
    rng = random.Random(8)
    for _ in range(40):
        n = rng.randint(2, 9)
        g = strongly_connected(n, rng.randint(n, 3 * n), rng)
        t = build_dfs_tree(g, 0)
        for a in range(n):
            for b in range(n):
                if t.is_ancestor(a, b) or t.is_ancestor(b, a) or t.visit_time[a] >= t.visit_time[b]:
                    continue
                common = {x for x in range(n) if t.is_ancestor(x, a) and t.is_ancestor(x, b)}
                for path in simple_paths(g, a, b):
                    assert common & set(path), (a, b, path)
