"""Fault-tolerant strongly connected components.

Preprocess a directed graph once, then report every SCC of the graph with up
to ``k`` edges or vertices removed (and optionally up to ``k`` edges added).
"""

from .errors import (
    ContractError,
    FailureBudgetExceeded,
    FtrsBudgetExceeded,
    FtsccError,
    GraphParseError,
    IndexFormatError,
    InvariantViolation,
)
from .fault_index import FtSccIndex, load_index, preprocess, query, save_index
from .graph_core import DirectedGraph, Edge, FailureSet, SccPartition, load_graph, tarjan_scc
from .updates import UpdateSet, query_with_updates

__all__ = [
    "ContractError",
    "DirectedGraph",
    "Edge",
    "FailureBudgetExceeded",
    "FailureSet",
    "FtSccIndex",
    "FtrsBudgetExceeded",
    "FtsccError",
    "GraphParseError",
    "IndexFormatError",
    "InvariantViolation",
    "SccPartition",
    "UpdateSet",
    "load_graph",
    "load_index",
    "preprocess",
    "query",
    "query_with_updates",
    "save_index",
    "tarjan_scc",
]
