"""Directed graphs, the static SCC baseline, and the vertex-splitting transform.

Vertices are dense integers ``0..n-1``. Graphs are immutable once built; every
operation here returns a new graph.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import ContractError, GraphParseError


class Edge(NamedTuple):
    src: int
    dst: int


class DirectedGraph:
    """Immutable edge store with forward and reverse adjacency.

    Parallel edges are collapsed. Self-loops are kept; they never change SCC
    membership. Edges are stored sorted by ``(src, dst)`` and an edge's
    position in :attr:`edges` is its edge id. Both adjacency lists are in
    ascending neighbour order, so every traversal over them is reproducible.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        unique = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ContractError(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
            unique.add((u, v))
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(Edge(u, v) for u, v in sorted(unique))
        out: list[list[int]] = [[] for _ in range(n)]
        inn: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            out[u].append(v)
            inn[v].append(u)
        # edges are sorted by (src, dst): out lists are already ascending
        self.out_adj: tuple[tuple[int, ...], ...] = tuple(tuple(a) for a in out)
        self.in_adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in inn)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def edge_ids(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_set

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    def max_in_degree(self) -> int:
        return max((len(a) for a in self.in_adj), default=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, m={self.m})"

    def to_text(self) -> str:
        lines = [f"p {self.n} {self.m}"]
        lines.extend(f"{u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class FailureSet:
    edges: frozenset[Edge] = frozenset()
    vertices: frozenset[int] = frozenset()

    @classmethod
    def of(cls, edges: Iterable[tuple[int, int]] = (), vertices: Iterable[int] = ()) -> FailureSet:
        return cls(frozenset(Edge(u, v) for u, v in edges), frozenset(vertices))

    def __len__(self) -> int:
        return len(self.edges) + len(self.vertices)

    def union(self, other: FailureSet) -> FailureSet:
        return FailureSet(self.edges | other.edges, self.vertices | other.vertices)


@dataclass(frozen=True)
class SccPartition:
    """Canonical SCC partition: each component sorted, components ordered by minimum id."""

    components: tuple[tuple[int, ...], ...]

    @classmethod
    def from_groups(cls, groups: Iterable[Iterable[int]]) -> SccPartition:
        comps = [tuple(sorted(g)) for g in groups]
        comps = [c for c in comps if c]
        comps.sort()
        return cls(tuple(comps))

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.components)

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.components)

    def labels(self) -> list[int]:
        """Component index of every vertex."""
        lab = [-1] * self.n
        for i, comp in enumerate(self.components):
            for v in comp:
                lab[v] = i
        return lab

    def component_of(self, v: int) -> tuple[int, ...]:
        for comp in self.components:
            if v in comp:
                return comp
        raise KeyError(v)

    def refines(self, coarser: SccPartition) -> bool:
        """True iff every component here lies inside one component of ``coarser``."""
        lab = coarser.labels()
        return all(len({lab[v] for v in comp}) == 1 for comp in self.components)

    def to_json(self) -> dict:
        return {"components": [list(c) for c in self.components]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


class InducedSubgraph(NamedTuple):
    graph: DirectedGraph
    to_global: tuple[int, ...]
    to_local: dict[int, int]


class SplitGraph(NamedTuple):
    """Result of :func:`split_vertices`.

    Vertex ``v`` becomes ``v_in = 2v`` and ``v_out = 2v + 1``.
    """

    graph: DirectedGraph
    edge_map: dict[Edge, Edge]
    vertex_map: dict[int, Edge]
    origin: tuple[int, ...]


def load_graph(text: str) -> DirectedGraph:
    """Parse the ``p <n> <m>`` edge-list format.

    ``#`` lines and blank lines are skipped. Duplicate edges are collapsed, so
    the resulting ``m`` may be below the declared one.
    """
    n = None
    edges: list[tuple[int, int]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 3 or parts[0] != "p":
                raise GraphParseError(f"expected header 'p <n> <m>', got {line!r}", lineno)
            try:
                n, declared_m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError(f"non-integer header field in {line!r}", lineno) from None
            if n < 1 or declared_m < 0:
                raise GraphParseError(f"invalid header counts in {line!r}", lineno)
            continue
        if len(parts) != 2:
            raise GraphParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(f"non-integer vertex id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphParseError(f"negative vertex id in {line!r}", lineno)
        if u >= n or v >= n:
            raise GraphParseError(f"vertex id {max(u, v)} >= declared n={n}", lineno)
        edges.append((u, v))
    if n is None:
        raise GraphParseError("empty document: missing 'p <n> <m>' header", max(last_line, 1))
    return DirectedGraph(n, edges)


def load_graph_remapped(text: str) -> tuple[DirectedGraph, tuple[int, ...]]:
    """Parse an edge list whose ids are arbitrary non-negative integers.

    Distinct ids are renumbered densely in ascending order. The returned tuple
    maps each dense id back to its label in the file. The header's ``n`` must
    cover the number of distinct ids; unused slots become isolated vertices
    labelled after the largest id seen.
    """
    header = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 3 or parts[0] != "p" or not parts[1].isdigit():
                raise GraphParseError(f"expected header 'p <n> <m>', got {line!r}", lineno)
            header = int(parts[1])
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphParseError(f"expected 'u v' with non-negative ids, got {line!r}", lineno)
        pairs.append((int(parts[0]), int(parts[1])))
    if header is None:
        raise GraphParseError("empty document: missing 'p <n> <m>' header", 1)
    labels = sorted({x for e in pairs for x in e})
    if len(labels) > header:
        raise GraphParseError(f"{len(labels)} distinct ids exceed declared n={header}", 1)
    nxt = labels[-1] + 1 if labels else 0
    while len(labels) < header:
        labels.append(nxt)
        nxt += 1
    dense = {lab: i for i, lab in enumerate(labels)}
    return DirectedGraph(header, [(dense[u], dense[v]) for u, v in pairs]), tuple(labels)


def tarjan_scc(g: DirectedGraph) -> SccPartition:
    """Exact SCC partition by Tarjan's algorithm (iterative)."""
    n = g.n
    out = g.out_adj
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    groups: list[list[int]] = []
    counter = 0
    for s in range(n):
        if index[s] != -1:
            continue
        index[s] = low[s] = counter
        counter += 1
        stack.append(s)
        on_stack[s] = True
        work = [(s, 0)]
        while work:
            v, i = work[-1]
            nbrs = out[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                groups.append(comp)
    return SccPartition.from_groups(groups)


def delete(g: DirectedGraph, f: FailureSet) -> DirectedGraph:
    """Copy of ``g`` without the failed edges.

    Vertex failures are not handled here; route them through
    :func:`split_vertices`.
    """
    if f.vertices:
        raise ContractError("delete() takes edge failures only; split vertices first")
    edge_set = g.edge_set
    for e in f.edges:
        if e not in edge_set:
            raise ContractError(f"edge not in graph: ({e[0]},{e[1]})")
    if not f.edges:
        return g
    return DirectedGraph(g.n, (e for e in g.edges if e not in f.edges))


def induced_subgraph(g: DirectedGraph, a: Iterable[int]) -> InducedSubgraph:
    members = sorted(set(a))
    for v in members:
        if not 0 <= v < g.n:
            raise ContractError(f"vertex {v} outside 0..{g.n - 1}")
    to_local = {v: i for i, v in enumerate(members)}
    edges = []
    for v in members:
        lu = to_local[v]
        for w in g.out_adj[v]:
            lw = to_local.get(w)
            if lw is not None:
                edges.append((lu, lw))
    return InducedSubgraph(DirectedGraph(len(members), edges), tuple(members), to_local)


def reverse(g: DirectedGraph) -> DirectedGraph:
    return DirectedGraph(g.n, ((v, u) for u, v in g.edges))


def reach_from(g: DirectedGraph, s: int, failed: Iterable[tuple[int, int]] = ()) -> set[int]:
    """Vertices reachable from ``s`` (inclusive), optionally avoiding some edges."""
    if not 0 <= s < g.n:
        raise ContractError(f"vertex {s} outside 0..{g.n - 1}")
    blocked: dict[int, set[int]] = {}
    for u, v in failed:
        blocked.setdefault(u, set()).add(v)
    seen = {s}
    queue = deque([s])
    out = g.out_adj
    while queue:
        u = queue.popleft()
        bad = blocked.get(u)
        for w in out[u]:
            if w not in seen and (bad is None or w not in bad):
                seen.add(w)
                queue.append(w)
    return seen


def split_vertices(g: DirectedGraph) -> SplitGraph:
    edge_map = {e: Edge(2 * e.src + 1, 2 * e.dst) for e in g.edges}
    vertex_map = {v: Edge(2 * v, 2 * v + 1) for v in range(g.n)}
    edges: list[tuple[int, int]] = list(edge_map.values())
    edges.extend(vertex_map.values())
    origin = tuple(x // 2 for x in range(2 * g.n))
    return SplitGraph(DirectedGraph(2 * g.n, edges), edge_map, vertex_map, origin)


def contract(groups: Iterable[Sequence[int]], origin: Sequence[int]) -> SccPartition:
    """Map groups of split-graph vertices back to original vertices.

    A nontrivial SCC of a split graph always holds both halves of each of its
    vertices, so collapsing through ``origin`` and dropping duplicate
    singletons yields a partition of the original vertex set.
    """
    seen: set[tuple[int, ...]] = set()
    out = []
    for grp in groups:
        key = tuple(sorted({origin[x] for x in grp}))
        if key not in seen:
            seen.add(key)
            out.append(key)
    return SccPartition.from_groups(out)
