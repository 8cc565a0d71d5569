"""Shared brute-force oracles and graph strategies.

Everything here is deliberately naive and shares no code with the package
beyond the ``DirectedGraph`` container.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from ftscc.graph_core import DirectedGraph


def bfs_reach(n, edges, s, dead=()):
    dead = set(dead)
    adj = {u: [] for u in range(n)}
    for u, v in edges:
        if (u, v) not in dead:
            adj[u].append(v)
    seen = {s}
    todo = [s]
    while todo:
        u = todo.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def closure_partition(n, edges):
    """SCCs as classes of mutual reachability, computed pairwise."""
    reach = [bfs_reach(n, edges, s) for s in range(n)]
    comps = []
    placed = set()
    for u in range(n):
        if u in placed:
            continue
        comp = tuple(sorted(v for v in range(n) if v in reach[u] and u in reach[v]))
        placed.update(comp)
        comps.append(comp)
    return tuple(sorted(comps))


def apply_updates(g, fail_edges=(), fail_vertices=(), insert=()):
    """Edge list of (G - F) + Y; failed vertices keep no incident edge."""
    fail_edges = {tuple(e) for e in fail_edges}
    dead = set(fail_vertices)
    edges = [tuple(e) for e in g.edges if tuple(e) not in fail_edges]
    edges += [tuple(e) for e in insert]
    return sorted({(u, v) for u, v in edges if u not in dead and v not in dead})


def oracle_sccs(g, fail_edges=(), fail_vertices=(), insert=()):
    return closure_partition(g.n, apply_updates(g, fail_edges, fail_vertices, insert))


def floyd_warshall_closure(n, edges):
    r = [[i == j for j in range(n)] for i in range(n)]
    for u, v in edges:
        r[u][v] = True
    for w in range(n):
        for i in range(n):
            if r[i][w]:
                row_w = r[w]
                row_i = r[i]
                for j in range(n):
                    if row_w[j]:
                        row_i[j] = True
    return r


def gnp_edges(n, p, rng):
    return [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p]


@st.composite
def graphs(draw, max_n=10, min_n=1):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
    edges = draw(st.lists(pairs, max_size=3 * n))
    return DirectedGraph(n, edges)


@pytest.fixture
def c3():
    return DirectedGraph(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def rng():
    return random.Random(12345)


# Acceptance criteria record one summary line each; the hook below prints
# them at the end of the run so they are visible without ``-s``.
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
