"""The fault-tolerant SCC index: preprocessing, queries, and the index file.

The index is built on the vertex-split graph so a failed vertex ``v`` is just
the failed edge ``(v_in, v_out)``. Each nontrivial SCC of the split graph gets
a DFS tree, its heavy-path decomposition, and one :class:`PathStructure` per
heavy path, built on the subgraph induced by the subtree under the path head.

A query sweeps the heavy paths of each component by non-decreasing head
depth. An SCC of ``G - F`` first met on a path lies wholly in that path's
subtree, so the group reported there is complete; later partial sightings
are subsets of already classified vertices and are dropped.
"""

from __future__ import annotations

import hashlib
import io
import os
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Optional, Sequence, Union

from .decomposition import (
    DfsTree,
    HeavyPath,
    HeavyPathDecomposition,
    build_dfs_tree,
    heavy_path_decompose,
)
from .errors import ContractError, FailureBudgetExceeded, IndexFormatError, InvariantViolation
from .ftrs import STRATEGIES, Ftrs, FtrsPair, ftrs_provider
from .graph_core import (
    DirectedGraph,
    Edge,
    FailureSet,
    SccPartition,
    SplitGraph,
    contract,
    induced_subgraph,
    reverse,
    split_vertices,
    tarjan_scc,
)
from . import path_scc
from .path_scc import PathStructure, build_path_structure, sccs_intersecting_path_with_failures


@dataclass(frozen=True, eq=False)
class PathDataStructure:
    """One heavy path with its structure over the subtree hanging from its head.

    ``heavy_path`` and ``subtree_vertices`` use component-local ids;
    ``structure`` uses ids local to the subtree (``subtree_vertices[i]`` is
    local vertex ``i``).
    """

    heavy_path: HeavyPath
    subtree_vertices: tuple[int, ...]
    structure: PathStructure
    to_local: dict[int, int]


@dataclass(frozen=True, eq=False)
class ComponentIndex:
    vertices: tuple[int, ...]
    graph: DirectedGraph
    tree: DfsTree
    decomposition: HeavyPathDecomposition
    structures: tuple[PathDataStructure, ...]
    to_local: dict[int, int]


@dataclass(frozen=True, eq=False)
class FtSccIndex:
    graph: DirectedGraph
    k: int
    strategy: str
    split: SplitGraph
    components: tuple[ComponentIndex, ...]
    singletons: tuple[int, ...]
    component_of: tuple[int, ...]
    global_pairs: Optional[dict[int, FtrsPair]] = None

    @property
    def split_graph(self) -> DirectedGraph:
        return self.split.graph

    @property
    def supports_updates(self) -> bool:
        return self.global_pairs is not None

    def path_count(self) -> int:
        return sum(len(c.structures) for c in self.components)

    def stats(self) -> dict:
        return {
            "n": self.graph.n,
            "m": self.graph.m,
            "k": self.k,
            "strategy": self.strategy,
            "components": len(self.components),
            "singleton_components": len(self.singletons),
            "paths": self.path_count(),
            "paths_per_component": [len(c.structures) for c in self.components],
            "with_updates": self.supports_updates,
        }


def _path_data(
    comp_graph: DirectedGraph,
    tree: DfsTree,
    path: HeavyPath,
    k: int,
    strategy: str,
    budget: Optional[int],
) -> PathDataStructure:
    sub = induced_subgraph(comp_graph, tree.subtree(path.head))
    local_path = tuple(sub.to_local[v] for v in path.vertices)
    ps = build_path_structure(sub.graph, local_path, k, strategy, budget)
    return PathDataStructure(path, sub.to_global, ps, sub.to_local)


def _component(
    split_graph: DirectedGraph,
    members: Sequence[int],
    k: int,
    strategy: str,
    budget: Optional[int],
) -> ComponentIndex:
    sub = induced_subgraph(split_graph, members)
    # to_global is sorted, so local 0 is the component's minimum id
    tree = build_dfs_tree(sub.graph, 0)
    dec = heavy_path_decompose(tree)
    structures = tuple(_path_data(sub.graph, tree, p, k, strategy, budget) for p in dec.paths)
    return ComponentIndex(sub.to_global, sub.graph, tree, dec, structures, sub.to_local)


def _assemble(
    graph: DirectedGraph,
    k: int,
    strategy: str,
    split: SplitGraph,
    components: Sequence[ComponentIndex],
    singletons: Sequence[int],
    global_pairs: Optional[dict[int, FtrsPair]],
) -> FtSccIndex:
    comp_of = [-1] * split.graph.n
    for ci, comp in enumerate(components):
        for v in comp.vertices:
            comp_of[v] = ci
    return FtSccIndex(
        graph, k, strategy, split, tuple(components), tuple(singletons), tuple(comp_of), global_pairs
    )


def preprocess(
    g: DirectedGraph,
    k: int,
    strategy: str = "trivial",
    with_updates: bool = False,
    budget: Optional[int] = None,
) -> FtSccIndex:
    """Build the index for up to ``k`` simultaneous edge/vertex failures."""
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")
    if strategy not in STRATEGIES:
        raise ContractError(f"unknown FTRS strategy {strategy!r}; expected one of {STRATEGIES}")
    split = split_vertices(g)
    components = []
    singletons = []
    for comp in tarjan_scc(split.graph).components:
        if len(comp) == 1:
            singletons.append(comp[0])
        else:
            components.append(_component(split.graph, comp, k, strategy, budget))
    global_pairs = None
    if with_updates:
        global_pairs = ftrs_provider(strategy, split.graph, range(split.graph.n), k, budget)
    return _assemble(g, k, strategy, split, components, singletons, global_pairs)


def translate_failures(ix: FtSccIndex, f: FailureSet) -> list[Edge]:
    """Validate ``f`` against the original graph and map it to split-graph edges."""
    if len(f) > ix.k:
        raise FailureBudgetExceeded(len(f), ix.k)
    out = []
    for e in sorted(f.edges):
        mapped = ix.split.edge_map.get(Edge(*e))
        if mapped is None:
            raise ContractError(f"edge not in graph: ({e[0]},{e[1]})")
        out.append(mapped)
    for v in sorted(f.vertices):
        if not 0 <= v < ix.graph.n:
            raise ContractError(f"vertex not in graph: {v}")
        out.append(ix.split.vertex_map[v])
    return out


def _component_groups(
    comp: ComponentIndex,
    failed: Sequence[tuple[int, int]],
    debug: bool,
    path_order: str,
) -> list[tuple[int, ...]]:
    n = len(comp.vertices)
    classified = bytearray(n)
    found: list[tuple[int, ...]] = []
    order = range(len(comp.structures))
    if path_order == "reverse":
        order = reversed(order)
    elif path_order != "depth":
        raise ContractError(f"unknown path order {path_order!r}")
    for si in order:
        pds = comp.structures[si]
        if not debug and all(classified[x] for x in pds.heavy_path.vertices):
            # every group found here meets the path, hence W, hence lies in W
            continue
        to_sub = pds.to_local
        local_failed = [
            (to_sub[u], to_sub[v]) for u, v in failed if u in to_sub and v in to_sub
        ]
        groups = sccs_intersecting_path_with_failures(pds.structure, local_failed, debug)
        sub_vertices = pds.subtree_vertices
        for grp in groups:
            members = [sub_vertices[x] for x in grp]
            done = sum(classified[x] for x in members)
            if done == len(members):
                continue
            if done and debug:
                raise InvariantViolation(
                    f"group {sorted(comp.vertices[x] for x in members)} partially overlaps "
                    f"classified vertices while sweeping path headed at {pds.heavy_path.head}"
                )
            for x in members:
                classified[x] = 1
            found.append(tuple(members))
    missing = [x for x in range(n) if not classified[x]]
    if missing:
        if debug:
            raise InvariantViolation(f"{len(missing)} vertices left unclassified after sweep")
        found.extend((x,) for x in missing)
    return [tuple(comp.vertices[x] for x in grp) for grp in found]


def query_split(
    ix: FtSccIndex,
    failed: Iterable[tuple[int, int]],
    debug: Optional[bool] = None,
    path_order: str = "depth",
) -> list[tuple[int, ...]]:
    """SCCs of ``split_graph - failed`` as groups of split-graph vertices.

    ``path_order="reverse"`` sweeps paths deepest first; it exists to show
    that the depth order matters and is never correct in general.
    """
    debug = path_scc.DEBUG if debug is None else debug
    failed = list(failed)
    by_comp: dict[int, list[tuple[int, int]]] = {}
    for u, v in failed:
        cu = ix.component_of[u]
        if cu >= 0 and cu == ix.component_of[v]:
            comp = ix.components[cu]
            by_comp.setdefault(cu, []).append((comp.to_local[u], comp.to_local[v]))
    groups: list[tuple[int, ...]] = [(s,) for s in ix.singletons]
    for ci, comp in enumerate(ix.components):
        groups.extend(_component_groups(comp, by_comp.get(ci, ()), debug, path_order))
    return groups


def query(
    ix: FtSccIndex, f: FailureSet, debug: Optional[bool] = None, path_order: str = "depth"
) -> SccPartition:
    """SCC partition of ``G - F`` for at most ``k`` failed edges and vertices."""
    failed = translate_failures(ix, f)
    return contract(query_split(ix, failed, debug, path_order), ix.split.origin)


# ---------------------------------------------------------------------------
# Index file
#
# All integers little-endian.
#   header : b"FTSCC1" | u16 version | u32 n | u32 m | u32 k | u8 strategy
#            | u8 flags (bit 0: update support) | u64 payload length
#   payload: m x (u32 src, u32 dst)               original edges, sorted
#            u32 component count
#            per component: u64 section length, then
#               u32 size, size x u32              split-graph ids, ascending
#               size x i32                        DFS parent (local id, -1 at root)
#               u32 path count, per path: u32 len, len x u32 local ids
#               per path, per path vertex: FTRS block (greedy only)
#            per split vertex: FTRS block (greedy with update support only)
#   trailer: u64 checksum = blake2b-64 of the payload
#   FTRS block: u32 e, e x (u32, u32) forward edges; u32 e', e' x (u32, u32)
#               backward edges (over the reversed host)
# ---------------------------------------------------------------------------

MAGIC = b"FTSCC1"
VERSION = 1
_HEADER = struct.Struct("<6sHIIIBBQ")
_STRATEGY_TAG = {"trivial": 0, "greedy": 1}


def _checksum(payload: bytes) -> bytes:
    return hashlib.blake2b(payload, digest_size=8).digest()


class _Writer:
    def __init__(self) -> None:
        self.buf = io.BytesIO()

    def u32(self, x: int) -> None:
        self.buf.write(struct.pack("<I", x))

    def u64(self, x: int) -> None:
        self.buf.write(struct.pack("<Q", x))

    def u32s(self, xs: Sequence[int]) -> None:
        self.buf.write(struct.pack(f"<{len(xs)}I", *xs))

    def i32s(self, xs: Sequence[int]) -> None:
        self.buf.write(struct.pack(f"<{len(xs)}i", *xs))

    def edges(self, es: Sequence[tuple[int, int]]) -> None:
        self.u32(len(es))
        self.u32s([x for e in es for x in e])

    def ftrs_pair(self, pair: FtrsPair) -> None:
        self.edges(pair.fwd.subgraph.edges)
        self.edges(pair.bwd.subgraph.edges)

    def getvalue(self) -> bytes:
        return self.buf.getvalue()


class _Reader:
    def __init__(self, data: bytes) -> None:
        self.data = data
        self.pos = 0

    def _take(self, size: int) -> bytes:
        if self.pos + size > len(self.data):
            raise IndexFormatError("index payload is truncated")
        chunk = self.data[self.pos : self.pos + size]
        self.pos += size
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self._take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._take(8))[0]

    def u32s(self, count: int) -> tuple[int, ...]:
        return struct.unpack(f"<{count}I", self._take(4 * count))

    def i32s(self, count: int) -> tuple[int, ...]:
        return struct.unpack(f"<{count}i", self._take(4 * count))

    def edges(self) -> list[tuple[int, int]]:
        count = self.u32()
        flat = self.u32s(2 * count)
        return list(zip(flat[0::2], flat[1::2]))


def _read_pair(r: _Reader, host: DirectedGraph, rev: DirectedGraph, source: int, k: int) -> FtrsPair:
    fwd = DirectedGraph(host.n, r.edges())
    bwd = DirectedGraph(host.n, r.edges())
    return FtrsPair(Ftrs(source, k, fwd, host, "greedy"), Ftrs(source, k, bwd, rev, "greedy"))


def index_bytes(ix: FtSccIndex) -> bytes:
    greedy = ix.strategy == "greedy"
    w = _Writer()
    w.u32s([x for e in ix.graph.edges for x in e])
    w.u32(len(ix.components))
    for comp in ix.components:
        cw = _Writer()
        size = len(comp.vertices)
        cw.u32(size)
        cw.u32s(comp.vertices)
        cw.i32s([-1 if p is None else p for p in comp.tree.parent])
        cw.u32(len(comp.structures))
        for pds in comp.structures:
            cw.u32(len(pds.heavy_path))
            cw.u32s(pds.heavy_path.vertices)
        if greedy:
            for pds in comp.structures:
                for pair in pds.structure.pairs:
                    cw.ftrs_pair(pair)
        section = cw.getvalue()
        w.u64(len(section))
        w.buf.write(section)
    if greedy and ix.global_pairs is not None:
        for v in range(ix.split_graph.n):
            w.ftrs_pair(ix.global_pairs[v])
    payload = w.getvalue()
    flags = 1 if ix.supports_updates else 0
    header = _HEADER.pack(
        MAGIC, VERSION, ix.graph.n, ix.graph.m, ix.k, _STRATEGY_TAG[ix.strategy], flags, len(payload)
    )
    return header + payload + _checksum(payload)


def save_index(ix: FtSccIndex, sink: Union[str, os.PathLike, BinaryIO]) -> None:
    data = index_bytes(ix)
    if hasattr(sink, "write"):
        sink.write(data)
    else:
        with open(sink, "wb") as fh:
            fh.write(data)


def _read_component(
    r: _Reader, split: SplitGraph, k: int, strategy: str
) -> ComponentIndex:
    size = r.u32()
    members = r.u32s(size)
    parents = r.i32s(size)
    sub = induced_subgraph(split.graph, members)
    if sub.to_global != tuple(members):
        raise IndexFormatError("component vertex list is not sorted and duplicate-free")
    children: list[list[int]] = [[] for _ in range(size)]
    root = None
    for v, p in enumerate(parents):
        if p < 0:
            root = v
        else:
            children[p].append(v)
    if root is None:
        raise IndexFormatError("component tree has no root")
    tree = DfsTree.from_children(root, children)
    paths = []
    for _ in range(r.u32()):
        length = r.u32()
        verts = r.u32s(length)
        paths.append(HeavyPath(verts, tree.depth[verts[0]]))
    head_of = [0] * size
    path_of = [0] * size
    for i, p in enumerate(paths):
        for v in p.vertices:
            head_of[v] = p.head
            path_of[v] = i
    dec = HeavyPathDecomposition(tuple(paths), tuple(head_of), tuple(path_of))
    structures = []
    for p in paths:
        if strategy == "greedy":
            host_sub = induced_subgraph(sub.graph, tree.subtree(p.head))
            host = host_sub.graph
            rev = reverse(host)
            local_path = tuple(host_sub.to_local[x] for x in p.vertices)
            pairs = tuple(_read_pair(r, host, rev, x, k) for x in local_path)
            ps = PathStructure(host, local_path, pairs, k, rev)
            structures.append(PathDataStructure(p, host_sub.to_global, ps, host_sub.to_local))
        else:
            structures.append(_path_data(sub.graph, tree, p, k, strategy, None))
    return ComponentIndex(sub.to_global, sub.graph, tree, dec, tuple(structures), sub.to_local)


def index_from_bytes(data: bytes) -> FtSccIndex:
    if len(data) < _HEADER.size:
        raise IndexFormatError("index file is truncated (incomplete header)")
    magic, version, n, m, k, tag, flags, length = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise IndexFormatError(f"bad magic {magic!r}: not an FTSCC index (version mismatch)")
    if version != VERSION:
        raise IndexFormatError(f"unsupported index format version {version}, expected {VERSION}")
    strategies = {v: s for s, v in _STRATEGY_TAG.items()}
    if tag not in strategies:
        raise IndexFormatError(f"unknown strategy tag {tag}")
    strategy = strategies[tag]
    body = data[_HEADER.size :]
    if len(body) < length + 8:
        raise IndexFormatError("index file is truncated")
    if len(body) > length + 8:
        raise IndexFormatError("trailing bytes after index checksum")
    payload = body[:length]
    if _checksum(payload) != body[length : length + 8]:
        raise IndexFormatError("index checksum mismatch")
    r = _Reader(payload)
    flat = r.u32s(2 * m)
    graph = DirectedGraph(n, zip(flat[0::2], flat[1::2]))
    split = split_vertices(graph)
    components = []
    for _ in range(r.u32()):
        section_len = r.u64()
        start = r.pos
        components.append(_read_component(r, split, k, strategy))
        if r.pos - start != section_len:
            raise IndexFormatError("component section length mismatch")
    covered = {v for c in components for v in c.vertices}
    singletons = [v for v in range(split.graph.n) if v not in covered]
    global_pairs = None
    if flags & 1:
        if strategy == "greedy":
            rev = reverse(split.graph)
            global_pairs = {v: _read_pair(r, split.graph, rev, v, k) for v in range(split.graph.n)}
        else:
            global_pairs = ftrs_provider("trivial", split.graph, range(split.graph.n), k)
    if r.pos != len(payload):
        raise IndexFormatError("trailing bytes in index payload")
    return _assemble(graph, k, strategy, split, components, singletons, global_pairs)


def load_index(source: Union[str, os.PathLike, BinaryIO]) -> FtSccIndex:
    if hasattr(source, "read"):
        data = source.read()
    else:
        with open(source, "rb") as fh:
            data = fh.read()
    return index_from_bytes(data)
