"""Fault-tolerant reachability subgraphs (k-FTRS).

A k-FTRS of ``host`` for source ``s`` is a subgraph ``H`` such that for every
set ``F`` of at most ``k`` host edges, ``s`` reaches the same vertices in
``host - F`` and in ``H - F``. Two providers are offered:

* ``trivial``: the host itself, always valid, no sparsity.
* ``greedy``: exhaustive edge-minimal pruning, for small hosts only.

Sparsity figures (edge count, max in-degree) are reported, never assumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Optional, Sequence

from .errors import ContractError, FtrsBudgetExceeded
from .graph_core import DirectedGraph, Edge, reverse

STRATEGIES = ("trivial", "greedy")
DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True, eq=False)
class Ftrs:
    source: int
    k: int
    subgraph: DirectedGraph
    host: DirectedGraph
    provider: str = "trivial"

    @property
    def edge_count(self) -> int:
        return self.subgraph.m

    @property
    def max_in_degree(self) -> int:
        return self.subgraph.max_in_degree()


@dataclass(frozen=True, eq=False)
class FtrsPair:
    fwd: Ftrs
    bwd: Ftrs

    @property
    def source(self) -> int:
        return self.fwd.source


@dataclass(frozen=True)
class FtrsReport:
    valid: bool
    edge_count: int
    max_in_degree: int
    counterexample: Optional[tuple[tuple[Edge, ...], int]] = None

    def to_json(self) -> dict:
        out: dict = {
            "valid": self.valid,
            "edge_count": self.edge_count,
            "max_in_degree": self.max_in_degree,
        }
        if self.counterexample is not None:
            failed, v = self.counterexample
            out["counterexample"] = {"failures": [list(e) for e in failed], "vertex": v}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))


def verification_cost(host: DirectedGraph, k: int) -> int:
    """Work units for one exhaustive FTRS check: sum_i C(m, i) * (m + n)."""
    sets = sum(comb(host.m, i) for i in range(k + 1))
    return sets * (host.m + host.n)


def _check_budget(host: DirectedGraph, k: int, budget: Optional[int]) -> None:
    limit = DEFAULT_BUDGET if budget is None else budget
    cost = verification_cost(host, k)
    if cost > limit:
        raise FtrsBudgetExceeded(
            f"exhaustive FTRS work {cost} exceeds budget {limit} "
            f"(n={host.n}, m={host.m}, k={k}); use the trivial provider"
        )


def failure_sets(edges: Sequence[Edge], k: int) -> Iterator[tuple[Edge, ...]]:
    """All subsets of ``edges`` of size 0..k, smallest first."""
    for size in range(k + 1):
        yield from combinations(edges, size)


def _reach_mask(out: Sequence[Iterable[int]], s: int, failed: tuple[Edge, ...]) -> int:
    blocked = {(u, v) for u, v in failed}
    seen = 1 << s
    stack = [s]
    while stack:
        u = stack.pop()
        for w in out[u]:
            if not (seen >> w) & 1 and (u, w) not in blocked:
                seen |= 1 << w
                stack.append(w)
    return seen


def _validate(host: DirectedGraph, s: int, k: int) -> None:
    if not 0 <= s < host.n:
        raise ContractError(f"source {s} outside 0..{host.n - 1}")
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")


def trivial_ftrs(host: DirectedGraph, s: int, k: int) -> Ftrs:
    _validate(host, s, k)
    return Ftrs(s, k, host, host, "trivial")


def greedy_sparse_ftrs(host: DirectedGraph, s: int, k: int, budget: Optional[int] = None) -> Ftrs:
    """Edge-minimal k-FTRS by a single descending-edge-id pruning pass.

    Dropping an edge can only shrink reachability, so an edge that was
    needed when scanned stays needed after later removals; one pass is
    enough for minimality. No bound on the result size is claimed.
    """
    _validate(host, s, k)
    _check_budget(host, k, budget)
    sets = list(failure_sets(host.edges, k))
    truth = [_reach_mask(host.out_adj, s, f) for f in sets]
    out: list[set[int]] = [set(a) for a in host.out_adj]
    for u, v in reversed(host.edges):
        out[u].discard(v)
        if any(_reach_mask(out, s, f) != want for f, want in zip(sets, truth)):
            out[u].add(v)
    kept = [(u, v) for u in range(host.n) for v in out[u]]
    return Ftrs(s, k, DirectedGraph(host.n, kept), host, "greedy")


def verify_ftrs(host: DirectedGraph, h: Ftrs, budget: Optional[int] = None) -> FtrsReport:
    """Check the k-FTRS definition exhaustively over every failure set of size <= k."""
    if h.subgraph.n != host.n:
        raise ContractError("FTRS and host have different vertex counts")
    _check_budget(host, h.k, budget)
    sub = h.subgraph
    valid = all(e in host.edge_set for e in sub.edges)
    counterexample = None
    if valid:
        for f in failure_sets(host.edges, h.k):
            want = _reach_mask(host.out_adj, h.source, f)
            got = _reach_mask(sub.out_adj, h.source, f)
            if want != got:
                diff = want ^ got
                counterexample = (f, (diff & -diff).bit_length() - 1)
                valid = False
                break
    return FtrsReport(valid, sub.m, sub.max_in_degree(), counterexample)


def ftrs_provider(
    strategy: str,
    host: DirectedGraph,
    sources: Iterable[int],
    k: int,
    budget: Optional[int] = None,
    reversed_host: Optional[DirectedGraph] = None,
) -> dict[int, FtrsPair]:
    """Build an :class:`FtrsPair` per source; ``bwd`` is built on the reversed host."""
    if strategy not in STRATEGIES:
        raise ContractError(f"unknown FTRS strategy {strategy!r}; expected one of {STRATEGIES}")
    sources = list(sources)
    if not sources:
        return {}
    rev = reversed_host if reversed_host is not None else reverse(host)
    pairs = {}
    for s in sources:
        if strategy == "trivial":
            pairs[s] = FtrsPair(trivial_ftrs(host, s, k), trivial_ftrs(rev, s, k))
        else:
            pairs[s] = FtrsPair(
                greedy_sparse_ftrs(host, s, k, budget), greedy_sparse_ftrs(rev, s, k, budget)
            )
    return pairs
