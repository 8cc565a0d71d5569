"""Command-line front end.

Exit codes: 0 success, 1 internal or parse error, 2 contract violation
(failure budget exceeded, unknown edge or vertex, FTRS budget).
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .errors import ContractError, FtsccError
from .fault_index import index_bytes, load_index, preprocess, query
from .ftrs import STRATEGIES, ftrs_provider, verify_ftrs
from .generators import strongly_connected
from .graph_core import FailureSet, load_graph
from .harness import BenchRow, DiffReport, bench_one, differential, random_failure_set, single_failures
from .updates import UpdateSet, query_with_updates

log = logging.getLogger("ftscc")


def _edge_arg(text: str) -> tuple[int, int]:
    try:
        u, v = text.split(",")
        return int(u), int(v)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'u,v', got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def read_directives(path: str) -> tuple[list[tuple[int, int]], list[int], list[tuple[int, int]]]:
    """Parse a failure file: one ``fail-edge u,v`` / ``fail-vertex v`` / ``insert-edge u,v`` per line."""
    edges, vertices, inserts = [], [], []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ContractError(f"{path}:{lineno}: expected '<directive> <arg>', got {line!r}")
        kind, arg = parts
        try:
            if kind == "fail-edge":
                edges.append(_edge_arg(arg))
            elif kind == "fail-vertex":
                vertices.append(int(arg))
            elif kind == "insert-edge":
                inserts.append(_edge_arg(arg))
            else:
                raise ContractError(f"{path}:{lineno}: unknown directive {kind!r}")
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ContractError(f"{path}:{lineno}: {exc}") from None
    return edges, vertices, inserts


def _gather(args: argparse.Namespace):
    edges = list(args.fail_edge or [])
    vertices = list(args.fail_vertex or [])
    inserts = list(getattr(args, "insert_edge", None) or [])
    if args.failures:
        e, v, i = read_directives(args.failures)
        edges += e
        vertices += v
        inserts += i
    return edges, vertices, inserts


def _emit(args: argparse.Namespace, payload: dict, text: Optional[str] = None) -> None:
    if args.format == "json" or text is None:
        print(json.dumps(payload, separators=(",", ":")))
    else:
        print(text)


def cmd_build(args: argparse.Namespace) -> int:
    g = load_graph(Path(args.graph).read_text())
    t0 = time.perf_counter()
    ix = preprocess(g, args.k, args.strategy, args.with_updates, args.budget)
    build_ms = (time.perf_counter() - t0) * 1e3
    log.info("built index with %d heavy paths in %.1f ms", ix.path_count(), build_ms)
    Path(args.index).write_bytes(index_bytes(ix))
    stats = ix.stats()
    stats["build_ms"] = round(build_ms, 3)
    text = " ".join(
        f"{key}={','.join(map(str, val)) if isinstance(val, list) else val}" for key, val in stats.items()
    )
    _emit(args, stats, text)
    return 0


def _partition_payload(part, elapsed_ms: float) -> dict:
    out = part.to_json()
    out["query_ms"] = round(elapsed_ms, 3)
    return out


def cmd_query(args: argparse.Namespace) -> int:
    ix = load_index(args.index)
    edges, vertices, inserts = _gather(args)
    if inserts:
        raise ContractError("insert-edge directives need the 'update' command")
    f = FailureSet.of(edges, vertices)
    t0 = time.perf_counter()
    part = query(ix, f)
    elapsed = (time.perf_counter() - t0) * 1e3
    _emit(args, _partition_payload(part, elapsed), "\n".join(" ".join(map(str, c)) for c in part.components))
    return 0


def cmd_update(args: argparse.Namespace) -> int:
    ix = load_index(args.index)
    edges, vertices, inserts = _gather(args)
    u = UpdateSet.of(edges, inserts, vertices)
    t0 = time.perf_counter()
    part = query_with_updates(ix, u)
    elapsed = (time.perf_counter() - t0) * 1e3
    _emit(args, _partition_payload(part, elapsed), "\n".join(" ".join(map(str, c)) for c in part.components))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    jobs = []
    if args.graph:
        g = load_graph(Path(args.graph).read_text())
        ix = load_index(args.index) if args.index else preprocess(g, args.k, args.strategy)
        if args.index and ix.graph != g:
            raise ContractError("index was built for a different graph")
        jobs.append((args.seed, ix))
    else:
        if args.index:
            ix = load_index(args.index)
            jobs.append((args.seed, ix))
        else:
            for s in range(args.seed, args.seed + args.seeds):
                g = strongly_connected(args.random_n, args.density * args.random_n, random.Random(s))
                jobs.append((s, preprocess(g, args.k, args.strategy)))
    if args.trials == 0 and not args.exhaustive:
        log.warning("no trials requested; verification passes vacuously")
    total = DiffReport()
    for seed, ix in jobs:
        rng = random.Random(seed)
        sets = list(single_failures(ix.graph)) if args.exhaustive else []
        sets += [random_failure_set(ix.graph, ix.k, rng) for _ in range(args.trials)]
        total.merge(differential(ix, sets))
    payload = total.to_json()
    payload["graphs"] = len(jobs)
    status = "pass" if total.ok else "fail"
    text = f"{status}: {total.passed}/{total.checked} failure sets matched over {len(jobs)} graph(s)"
    if total.first_counterexample:
        text += "\nfirst counterexample: " + json.dumps(total.first_counterexample)
    _emit(args, {"status": status, **payload}, text)
    return 0 if total.ok else 1


def cmd_bench(args: argparse.Namespace) -> int:
    rows: list[BenchRow] = []
    print(BenchRow.HEADER)
    for k in args.k:
        for n in args.sizes:
            row = bench_one(n, args.density, k, args.queries, args.seed, args.strategy, args.repeats)
            rows.append(row)
            print(row.csv(), flush=True)
    for k in args.k:
        krows = [r for r in rows if r.k == k]
        if len(krows) > 1 and krows[0].mean_query_ms > 0:
            ratio = krows[-1].mean_query_ms / krows[0].mean_query_ms
            print(
                f"# k={k}: mean_query_ms ratio n={krows[-1].n}/n={krows[0].n} = {ratio:.2f}",
                file=sys.stderr,
            )
    if args.strategy == "trivial":
        print(
            "# trivial FTRS provider: reachability runs over the full host, so query time "
            "tracks m log n rather than the sparsifier-based 2^k n log^2 n bound",
            file=sys.stderr,
        )
    return 0


def cmd_ftrs_check(args: argparse.Namespace) -> int:
    g = load_graph(Path(args.graph).read_text())
    pair = ftrs_provider(args.strategy, g, [args.source], args.k, args.budget)[args.source]
    fwd = verify_ftrs(g, pair.fwd, args.budget)
    bwd = verify_ftrs(pair.bwd.host, pair.bwd, args.budget)
    payload = {"source": args.source, "k": args.k, "fwd": fwd.to_json(), "bwd": bwd.to_json()}
    text = (
        f"source={args.source} k={args.k} "
        f"fwd valid={fwd.valid} edges={fwd.edge_count} max_in={fwd.max_in_degree} "
        f"bwd valid={bwd.valid} edges={bwd.edge_count} max_in={bwd.max_in_degree}"
    )
    _emit(args, payload, text)
    return 0 if fwd.valid and bwd.valid else 1


def _positive(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("k must be >= 1")
    return k


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftscc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("json", "text"), default="json")

    def failures(p: argparse.ArgumentParser) -> None:
        p.add_argument("--fail-edge", type=_edge_arg, action="append", metavar="U,V")
        p.add_argument("--fail-vertex", type=int, action="append", metavar="V")
        p.add_argument("--failures", metavar="FILE", help="failure directives, one per line")

    p = sub.add_parser("build", help="preprocess a graph into an index file")
    p.add_argument("--graph", required=True)
    p.add_argument("--index", "-o", required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--strategy", choices=STRATEGIES, default="trivial")
    p.add_argument("--with-updates", action="store_true")
    p.add_argument("--budget", type=int, default=None, help="work budget for the greedy FTRS")
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="SCCs after failures")
    p.add_argument("--index", required=True)
    failures(p)
    common(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("update", help="SCCs after failures and edge insertions")
    p.add_argument("--index", required=True)
    failures(p)
    p.add_argument("--insert-edge", type=_edge_arg, action="append", metavar="U,V")
    common(p)
    p.set_defaults(func=cmd_update)

    p = sub.add_parser("verify", help="compare index answers with the static oracle")
    p.add_argument("--graph")
    p.add_argument("--index")
    p.add_argument("--random-n", type=int, default=15, help="vertex count of generated graphs")
    p.add_argument("--density", type=int, default=3, help="edges per vertex of generated graphs")
    p.add_argument("--seeds", type=int, default=1, help="number of generated graphs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--strategy", choices=STRATEGIES, default="trivial")
    p.add_argument("--trials", type=int, default=100, help="random failure sets per graph")
    p.add_argument("--exhaustive", action="store_true", help="also try every single failure")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="CSV timing table over random strongly connected graphs")
    p.add_argument("--sizes", type=_int_list, default=[1000, 2000, 4000])
    p.add_argument("--density", type=int, default=10)
    p.add_argument("--k", type=_int_list, default=[1])
    p.add_argument("--queries", type=int, default=20)
    p.add_argument("--repeats", type=int, default=1, help="time each query this many times, keep the best")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strategy", choices=STRATEGIES, default="trivial")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("ftrs-check", help="build and exhaustively verify one FTRS pair")
    p.add_argument("--graph", required=True)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--strategy", choices=STRATEGIES, default="trivial")
    p.add_argument("--budget", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_ftrs_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.handlers = [handler]
    log.propagate = False
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FtsccError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
