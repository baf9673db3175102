"""Exact per-edge typed graphlet counts on node-typed graphs."""

from .aggregate import GlobalCountTable, global_counts
from .counting import ConsistencyError, count_all, count_edge, orbits_to_graphlets
from .embedding import embed, motif_weighted_graph
from .graph import GraphFormatError, HeteroGraph, load_graph, validate, write_graph
from .keys import POSITION_AWARE, TYPED, GraphletKey, decode, encode
from .oracle import oracle_counts
from .storage import LocalCountTable, read_counts, write_counts

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError", "GlobalCountTable", "GraphFormatError", "GraphletKey",
    "HeteroGraph", "LocalCountTable", "POSITION_AWARE", "TYPED", "count_all",
    "count_edge", "decode", "embed", "encode", "global_counts", "load_graph",
    "motif_weighted_graph", "oracle_counts", "orbits_to_graphlets", "read_counts",
    "validate", "write_counts", "write_graph",
]
