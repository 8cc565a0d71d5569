"""Queries mixing up to k deletions with up to k edge insertions.

Inserted edges can only merge SCCs of ``G - X``. Any merged SCC contains an
endpoint of an inserted edge, and the SCC of such an endpoint is already
exact in the small auxiliary graph made of the inserted edges plus the
forward and backward FTRS of every endpoint. So the answer is the deletion
query's partition with those auxiliary components fused in.

A failed vertex stays failed: inserted edges touching it land on its split
halves but cannot carry a path through it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .errors import ContractError
from .fault_index import FtSccIndex, query_split, translate_failures
from .graph_core import DirectedGraph, Edge, FailureSet, SccPartition, contract, tarjan_scc


@dataclass(frozen=True)
class UpdateSet:
    deletions: frozenset[Edge] = frozenset()
    insertions: frozenset[Edge] = frozenset()
    failed_vertices: frozenset[int] = frozenset()

    @classmethod
    def of(
        cls,
        deletions: Iterable[tuple[int, int]] = (),
        insertions: Iterable[tuple[int, int]] = (),
        failed_vertices: Iterable[int] = (),
    ) -> UpdateSet:
        return cls(
            frozenset(Edge(u, v) for u, v in deletions),
            frozenset(Edge(u, v) for u, v in insertions),
            frozenset(failed_vertices),
        )

    @property
    def failures(self) -> FailureSet:
        return FailureSet(self.deletions, self.failed_vertices)


class UpdateGraph(NamedTuple):
    """Auxiliary graph ``H - X`` in split-graph ids, inserted edges included."""

    graph: DirectedGraph
    sources: tuple[int, ...]
    inserted: tuple[Edge, ...]
    deleted: tuple[Edge, ...]
    edge_bound: int


def _validate(ix: FtSccIndex, u: UpdateSet) -> None:
    if not ix.supports_updates:
        raise ContractError("index was built without update support (rebuild with with_updates=True)")
    if len(u.insertions) > ix.k:
        raise ContractError(f"insertion budget exceeded: {len(u.insertions)} insertions, k={ix.k}")
    n = ix.graph.n
    for a, b in u.insertions:
        if not (0 <= a < n and 0 <= b < n):
            raise ContractError(f"inserted edge ({a},{b}) has an endpoint outside the graph")


def build_update_graph(ix: FtSccIndex, u: UpdateSet) -> UpdateGraph:
    _validate(ix, u)
    deleted = translate_failures(ix, u.failures)
    inserted = sorted({Edge(2 * a + 1, 2 * b) for a, b in u.insertions})
    sources = sorted({x for e in inserted for x in e})
    edges: set[tuple[int, int]] = set()
    bound = len(inserted)
    for s in sources:
        pair = ix.global_pairs[s]
        edges.update(pair.fwd.subgraph.edges)
        # the backward FTRS lives on the reversed graph; turn its edges around
        edges.update((b, a) for a, b in pair.bwd.subgraph.edges)
        bound += pair.fwd.edge_count + pair.bwd.edge_count
    # deletions first, then insertions: a deleted edge may be re-inserted
    edges.difference_update(deleted)
    edges.update(inserted)
    graph = DirectedGraph(ix.split_graph.n, edges)
    return UpdateGraph(graph, tuple(sources), tuple(inserted), tuple(deleted), bound)


def merge_groups(
    groups: list[tuple[int, ...]], aux: SccPartition, sources: Iterable[int]
) -> list[tuple[int, ...]]:
    """Fuse every group lying inside the auxiliary SCC of some source."""
    aux_label = aux.labels()
    targets = {aux_label[s] for s in sources}
    merged: dict[int, list[int]] = {}
    out = []
    for grp in groups:
        lab = aux_label[grp[0]]
        if lab in targets:
            merged.setdefault(lab, []).extend(grp)
        else:
            out.append(grp)
    out.extend(tuple(g) for g in merged.values())
    return out


def query_with_updates(ix: FtSccIndex, u: UpdateSet, debug: Optional[bool] = None) -> SccPartition:
    """SCC partition of ``(G - X) + Y``."""
    _validate(ix, u)
    base = query_split(ix, translate_failures(ix, u.failures), debug)
    if not u.insertions:
        return contract(base, ix.split.origin)
    aux = build_update_graph(ix, u)
    merged = merge_groups(base, tarjan_scc(aux.graph), aux.sources)
    return contract(merged, ix.split.origin)
