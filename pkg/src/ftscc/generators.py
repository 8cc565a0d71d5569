"""Seeded random graph families for tests, verification, and benchmarks."""

from __future__ import annotations

import random

from .graph_core import DirectedGraph


def gnp(n: int, p: float, rng: random.Random) -> DirectedGraph:
    """Erdos-Renyi digraph: each ordered pair ``u != v`` is an edge with probability ``p``."""
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]
    return DirectedGraph(n, edges)


def strongly_connected(n: int, m: int, rng: random.Random) -> DirectedGraph:
    """Random Hamiltonian cycle plus uniformly random extra edges, ``m`` edges in total.

    ``m`` is clipped to ``[n, n(n-1)]`` (a single vertex gets no edges).
    """
    if n == 1:
        return DirectedGraph(1)
    m = max(n, min(m, n * (n - 1)))
    perm = list(range(n))
    rng.shuffle(perm)
    edges = {(perm[i], perm[(i + 1) % n]) for i in range(n)}
    if m > n * (n - 1) // 2:
        rest = [(u, v) for u in range(n) for v in range(n) if u != v and (u, v) not in edges]
        edges.update(rng.sample(rest, m - len(edges)))
    while len(edges) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            edges.add((u, v))
    return DirectedGraph(n, edges)


def random_tree_graph(n: int, rng: random.Random) -> DirectedGraph:
    """Random recursive tree rooted at 0, as parent -> child edges.

    DFS from 0 on this graph reproduces the tree exactly.
    """
    edges = [(rng.randrange(v), v) for v in range(1, n)]
    return DirectedGraph(n, edges)


def random_path_in_tree(tree_parent, rng: random.Random) -> list[int]:
    """A random downward tree path, returned root-side first."""
    n = len(tree_parent)
    v = rng.randrange(n)
    path = [v]
    steps = rng.randrange(n)
    while steps and tree_parent[path[-1]] is not None:
        path.append(tree_parent[path[-1]])
        steps -= 1
    return path[::-1]
