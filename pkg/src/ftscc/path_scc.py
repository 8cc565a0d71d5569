"""SCCs of ``host - F`` that intersect a fixed path.

For a path ``x_0 .. x_{t-1}`` left intact by ``F``, every vertex ``v`` gets two
marks: ``x_out(v)``, the largest path index that reaches ``v``, and
``x_in(v)``, the smallest path index reachable from ``v``. A vertex lies in an
SCC meeting the path iff both marks exist and ``x_in(v) <= x_out(v)``, and two
such vertices share an SCC iff their mark pairs agree.

``x_out`` is found by bisecting the path. The sets ``V_i`` reached from
``x_i`` are nested, so a work item ``(i, j, A)`` always holds exactly the
vertices whose ``x_out`` falls in ``[i, j]``, and reachability from the middle
vertex can be decided inside ``A`` alone using the in-edges of ``A`` in that
vertex's FTRS.

Set ``FTSCC_DEBUG=1`` (or pass ``debug=True``) to check every work item
against a brute-force BFS oracle.
"""

from __future__ import annotations

import os
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ContractError, FailureBudgetExceeded, InvariantViolation
from .ftrs import FtrsPair, ftrs_provider
from .graph_core import DirectedGraph, reverse

DEBUG = os.environ.get("FTSCC_DEBUG", "") not in ("", "0")

Blocked = dict[int, set[int]]


@dataclass(frozen=True, eq=False)
class PathStructure:
    host: DirectedGraph
    path: tuple[int, ...]
    pairs: tuple[FtrsPair, ...]
    k: int
    reversed_host: DirectedGraph

    def fwd_subgraphs(self) -> list[DirectedGraph]:
        return [p.fwd.subgraph for p in self.pairs]

    def bwd_subgraphs(self) -> list[DirectedGraph]:
        return [p.bwd.subgraph for p in self.pairs]


def build_path_structure(
    host: DirectedGraph,
    path: Sequence[int],
    k: int,
    provider_strategy: str = "trivial",
    budget: Optional[int] = None,
) -> PathStructure:
    path = tuple(path)
    if not path:
        raise ContractError("path must contain at least one vertex")
    if len(set(path)) != len(path):
        raise ContractError("path vertices must be distinct")
    for u, v in zip(path, path[1:]):
        if not host.has_edge(u, v):
            raise ContractError(f"path edge ({u},{v}) is not in the host graph")
    rev = reverse(host)
    pairs = ftrs_provider(provider_strategy, host, path, k, budget, reversed_host=rev)
    return PathStructure(host, path, tuple(pairs[x] for x in path), k, rev)


def _blocked(failed: Iterable[tuple[int, int]]) -> tuple[Blocked, Blocked]:
    out: Blocked = {}
    inn: Blocked = {}
    for u, v in failed:
        out.setdefault(u, set()).add(v)
        inn.setdefault(v, set()).add(u)
    return out, inn


def _bfs(g: DirectedGraph, s: int, blocked_out: Blocked) -> list[int]:
    seen = bytearray(g.n)
    seen[s] = 1
    order = [s]
    out = g.out_adj
    for u in order:
        bad = blocked_out.get(u) if blocked_out else None
        for w in out[u]:
            if not seen[w] and (bad is None or w not in bad):
                seen[w] = 1
                order.append(w)
    return order


class _Oracle:
    """Brute-force reachability on the real host, for debug checks only."""

    def __init__(self, host: DirectedGraph, seg: Sequence[int], blocked_out: Blocked, blocked_in: Blocked):
        self.host = host
        self.blocked_out = blocked_out
        self.blocked_in = blocked_in
        self.reach = [set(_bfs(host, x, blocked_out)) for x in seg]
        self.x_out: list[Optional[int]] = [None] * host.n
        for i, r in enumerate(self.reach):
            for v in r:
                self.x_out[v] = i
        for v in range(host.n):
            j = self.x_out[v]
            if j is not None and any(v not in self.reach[i] for i in range(j)):
                raise InvariantViolation(f"reachable sets along the path are not nested at vertex {v}")

    def check_work_item(self, i: int, j: int, members: Sequence[int]) -> None:
        want = {v for v, x in enumerate(self.x_out) if x is not None and i <= x <= j}
        if set(members) != want:
            raise InvariantViolation(
                f"work item ({i},{j}) holds {sorted(members)}, expected {sorted(want)}"
            )

    def check_confined(self, mid: int, members: Sequence[int]) -> None:
        # every x_mid -> z path with z in A stays inside A
        inside = set(members)
        if not inside:
            return
        rev_seen = set(inside)
        queue = deque(inside)
        while queue:
            v = queue.popleft()
            bad = self.blocked_in.get(v)
            for u in self.host.in_adj[v]:
                if u not in rev_seen and (bad is None or u not in bad):
                    rev_seen.add(u)
                    queue.append(u)
        leak = (self.reach[mid] & rev_seen) - inside
        if leak:
            raise InvariantViolation(
                f"paths from path index {mid} into the work set leave it via {sorted(leak)[:5]}"
            )


def _reach_within(
    sub: DirectedGraph,
    x: int,
    members: Sequence[int],
    stamp: list[int],
    epoch: int,
    blocked_in: Blocked,
) -> list[int]:
    """Vertices of ``members`` reachable from ``x`` in ``sub - F`` restricted to ``members``.

    ``members`` must be stamped with ``epoch``; reached vertices leave stamped
    ``epoch + 1``. Only in-edges of members are scanned.
    """
    if stamp[x] != epoch:
        return []
    adj: defaultdict[int, list[int]] = defaultdict(list)
    in_adj = sub.in_adj
    for v in members:
        bad = blocked_in.get(v) if blocked_in else None
        if bad is None:
            for y in in_adj[v]:
                if stamp[y] == epoch:
                    adj[y].append(v)
        else:
            for y in in_adj[v]:
                if stamp[y] == epoch and y not in bad:
                    adj[y].append(v)
    # members are stamped; restamp as visited so no extra set is needed
    seen = epoch + 1
    stamp[x] = seen
    order = [x]
    for u in order:
        if u in adj:
            for w in adj[u]:
                if stamp[w] == epoch:
                    stamp[w] = seen
                    order.append(w)
    return order


def _marks_out(
    n: int,
    seg: Sequence[int],
    subs: Sequence[DirectedGraph],
    blocked_out: Blocked,
    blocked_in: Blocked,
    oracle: Optional[_Oracle] = None,
) -> list[Optional[int]]:
    """``x_out`` for every vertex, as an index into ``seg``."""
    t = len(seg)
    marks: list[Optional[int]] = [None] * n
    first = _bfs(subs[0], seg[0], blocked_out)
    if t == 1:
        for v in first:
            marks[v] = 0
        return marks
    for v in _bfs(subs[-1], seg[-1], blocked_out):
        marks[v] = t - 1
    stamp = [0] * n
    epoch = 0
    stack = [(0, t - 2, [v for v in first if marks[v] is None])]
    while stack:
        i, j, members = stack.pop()
        if oracle is not None:
            oracle.check_work_item(i, j, members)
        if not members:
            continue
        if i == j:
            for v in members:
                marks[v] = i
            continue
        mid = (i + j + 1) // 2
        epoch += 1
        for v in members:
            stamp[v] = epoch
        if oracle is not None:
            oracle.check_confined(mid, members)
        reached = _reach_within(subs[mid], seg[mid], members, stamp, epoch, blocked_in)
        epoch += 1
        rest = [v for v in members if stamp[v] != epoch]
        stack.append((i, mid - 1, rest))
        stack.append((mid, j, reached))
    return marks


def _prepare(ps: PathStructure, failed: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    failed = [(u, v) for u, v in failed]
    if len(set(failed)) > ps.k:
        raise FailureBudgetExceeded(len(set(failed)), ps.k)
    return failed


def _check_intact(path: Sequence[int], failed: Iterable[tuple[int, int]]) -> None:
    on_path = set(zip(path, path[1:]))
    hit = [e for e in failed if e in on_path]
    if hit:
        raise ContractError(f"failed edge {hit[0]} lies on the path")


def _x_out_segment(ps: PathStructure, lo: int, hi: int, bout: Blocked, binn: Blocked, debug: bool):
    seg = ps.path[lo : hi + 1]
    oracle = _Oracle(ps.host, seg, bout, binn) if debug else None
    return _marks_out(ps.host.n, seg, ps.fwd_subgraphs()[lo : hi + 1], bout, binn, oracle)


def _x_in_segment(ps: PathStructure, lo: int, hi: int, bout: Blocked, binn: Blocked, debug: bool):
    # x_in on the path is x_out on the reversed path in the reversed graph
    seg = ps.path[lo : hi + 1][::-1]
    subs = ps.bwd_subgraphs()[lo : hi + 1][::-1]
    oracle = _Oracle(ps.reversed_host, seg, binn, bout) if debug else None
    rev = _marks_out(ps.host.n, seg, subs, binn, bout, oracle)
    last = hi - lo
    return [None if r is None else last - r for r in rev]


def compute_x_out(
    ps: PathStructure, failed: Iterable[tuple[int, int]] = (), debug: Optional[bool] = None
) -> list[Optional[int]]:
    """Largest path index that reaches each vertex in ``host - F`` (``None`` if no index does)."""
    failed = _prepare(ps, failed)
    _check_intact(ps.path, failed)
    bout, binn = _blocked(failed)
    return _x_out_segment(ps, 0, len(ps.path) - 1, bout, binn, DEBUG if debug is None else debug)


def compute_x_in(
    ps: PathStructure, failed: Iterable[tuple[int, int]] = (), debug: Optional[bool] = None
) -> list[Optional[int]]:
    """Smallest path index reachable from each vertex in ``host - F`` (``None`` if none is)."""
    failed = _prepare(ps, failed)
    _check_intact(ps.path, failed)
    bout, binn = _blocked(failed)
    return _x_in_segment(ps, 0, len(ps.path) - 1, bout, binn, DEBUG if debug is None else debug)


def _groups_on_segment(
    ps: PathStructure, lo: int, hi: int, bout: Blocked, binn: Blocked, debug: bool
) -> list[tuple[int, ...]]:
    x_out = _x_out_segment(ps, lo, hi, bout, binn, debug)
    x_in = _x_in_segment(ps, lo, hi, bout, binn, debug)
    groups: dict[tuple[int, int], list[int]] = {}
    for v in range(ps.host.n):
        a, b = x_in[v], x_out[v]
        if a is not None and b is not None and a <= b:
            groups.setdefault((a, b), []).append(v)
    return sorted(tuple(g) for g in groups.values())


def sccs_intersecting_path(
    ps: PathStructure, failed: Iterable[tuple[int, int]] = (), debug: Optional[bool] = None
) -> list[tuple[int, ...]]:
    """SCCs of ``host - F`` containing a path vertex; ``F`` must avoid the path's edges."""
    failed = _prepare(ps, failed)
    _check_intact(ps.path, failed)
    bout, binn = _blocked(failed)
    return _groups_on_segment(ps, 0, len(ps.path) - 1, bout, binn, DEBUG if debug is None else debug)


def split_points(path: Sequence[int], failed: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Maximal ``(lo, hi)`` index ranges of ``path`` containing no failed edge."""
    dead = set(failed)
    ranges = []
    lo = 0
    for i in range(len(path) - 1):
        if (path[i], path[i + 1]) in dead:
            ranges.append((lo, i))
            lo = i + 1
    ranges.append((lo, len(path) - 1))
    return ranges


def sccs_intersecting_path_with_failures(
    ps: PathStructure, failed: Iterable[tuple[int, int]] = (), debug: Optional[bool] = None
) -> list[tuple[int, ...]]:
    """As :func:`sccs_intersecting_path`, but failed path edges split the path into pieces."""
    failed = _prepare(ps, failed)
    bout, binn = _blocked(failed)
    debug = DEBUG if debug is None else debug
    found: dict[int, tuple[int, ...]] = {}
    for lo, hi in split_points(ps.path, failed):
        for grp in _groups_on_segment(ps, lo, hi, bout, binn, debug):
            found.setdefault(grp[0], grp)
    return [found[r] for r in sorted(found)]
