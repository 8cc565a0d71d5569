"""DFS trees and their heavy-path decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ContractError
from .graph_core import DirectedGraph


@dataclass(frozen=True, eq=False)
class DfsTree:
    """Rooted DFS tree with visit/finish times drawn from one shared clock.

    ``order`` is the preorder; the subtree of ``v`` is the contiguous slice
    ``order[pos[v] : pos[v] + subtree_size[v]]``.
    """

    root: int
    parent: tuple[Optional[int], ...]
    children: tuple[tuple[int, ...], ...]
    visit_time: tuple[int, ...]
    finish_time: tuple[int, ...]
    depth: tuple[int, ...]
    subtree_size: tuple[int, ...]
    order: tuple[int, ...]
    pos: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.parent)

    def is_ancestor(self, a: int, b: int) -> bool:
        """True iff ``a`` is ``b`` or a proper ancestor of it."""
        return self.visit_time[a] <= self.visit_time[b] and self.finish_time[b] <= self.finish_time[a]

    def subtree(self, a: int) -> tuple[int, ...]:
        p = self.pos[a]
        return self.order[p : p + self.subtree_size[a]]

    @classmethod
    def from_children(cls, root: int, children: Sequence[Sequence[int]]) -> DfsTree:
        """Rebuild times and sizes from a child list (children in DFS visit order)."""
        n = len(children)
        parent: list[Optional[int]] = [None] * n
        depth = [0] * n
        visit = [-1] * n
        finish = [-1] * n
        order: list[int] = []
        clock = 0
        visit[root] = clock
        clock += 1
        order.append(root)
        stack = [(root, 0)]
        while stack:
            v, i = stack[-1]
            kids = children[v]
            if i < len(kids):
                stack[-1] = (v, i + 1)
                w = kids[i]
                parent[w] = v
                depth[w] = depth[v] + 1
                visit[w] = clock
                clock += 1
                order.append(w)
                stack.append((w, 0))
            else:
                finish[v] = clock
                clock += 1
                stack.pop()
        if len(order) != n:
            missing = next(v for v in range(n) if visit[v] == -1)
            raise ContractError(f"vertex {missing} is not in the tree rooted at {root}")
        size = [1] * n
        for v in reversed(order):
            p = parent[v]
            if p is not None:
                size[p] += size[v]
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        return cls(
            root=root,
            parent=tuple(parent),
            children=tuple(tuple(c) for c in children),
            visit_time=tuple(visit),
            finish_time=tuple(finish),
            depth=tuple(depth),
            subtree_size=tuple(size),
            order=tuple(order),
            pos=tuple(pos),
        )


def build_dfs_tree(g: DirectedGraph, root: int) -> DfsTree:
    """Deterministic DFS tree; out-neighbours are explored in ascending id order."""
    n = g.n
    if not 0 <= root < n:
        raise ContractError(f"root {root} outside 0..{n - 1}")
    out = g.out_adj
    seen = [False] * n
    children: list[list[int]] = [[] for _ in range(n)]
    seen[root] = True
    stack = [(root, 0)]
    while stack:
        v, i = stack[-1]
        nbrs = out[v]
        while i < len(nbrs) and seen[nbrs[i]]:
            i += 1
        if i == len(nbrs):
            stack.pop()
            continue
        w = nbrs[i]
        stack[-1] = (v, i + 1)
        seen[w] = True
        children[v].append(w)
        stack.append((w, 0))
    if not all(seen):
        missing = seen.index(False)
        raise ContractError(f"vertex {missing} is unreachable from root {root}")
    return DfsTree.from_children(root, children)


@dataclass(frozen=True)
class HeavyPath:
    vertices: tuple[int, ...]
    depth: int

    @property
    def head(self) -> int:
        return self.vertices[0]

    @property
    def tail(self) -> int:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class HeavyPathDecomposition:
    paths: tuple[HeavyPath, ...]
    head_of: tuple[int, ...]
    path_of: tuple[int, ...]

    def dump(self) -> str:
        return "\n".join(
            f"depth={p.depth} head={p.head} tail={p.tail} len={len(p)}" for p in self.paths
        )


def heavy_child(t: DfsTree, v: int) -> Optional[int]:
    kids = t.children[v]
    if not kids:
        return None
    size = t.subtree_size
    # largest subtree, ties to the smallest id
    return min(kids, key=lambda c: (-size[c], c))


def heavy_path_decompose(t: DfsTree) -> HeavyPathDecomposition:
    """Split ``t`` into heavy paths sorted by (depth of head, head id)."""
    paths: list[HeavyPath] = []
    pending = [t.root]
    while pending:
        a = pending.pop()
        verts = [a]
        v = a
        while True:
            h = heavy_child(t, v)
            if h is None:
                break
            pending.extend(c for c in t.children[v] if c != h)
            verts.append(h)
            v = h
        paths.append(HeavyPath(tuple(verts), t.depth[a]))
    paths.sort(key=lambda p: (p.depth, p.head))
    head_of = [0] * t.n
    path_of = [0] * t.n
    for i, p in enumerate(paths):
        for v in p.vertices:
            head_of[v] = p.head
            path_of[v] = i
    return HeavyPathDecomposition(tuple(paths), tuple(head_of), tuple(path_of))


def ancestor_paths_count(d: HeavyPathDecomposition, t: DfsTree, v: int) -> int:
    """Number of heavy paths whose head is ``v`` or an ancestor of ``v``."""
    count = 0
    x: Optional[int] = v
    while x is not None:
        count += 1
        x = t.parent[d.head_of[x]]
    return count
