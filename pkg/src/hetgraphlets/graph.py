"""Node-typed undirected graphs in compressed adjacency form, plus edge/type file I/O."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

_COMMENT_PREFIXES = ("#", "%")


class GraphFormatError(ValueError):
    """Raised for malformed edge or type files and invalid graph input."""


class HeteroGraph:
    """Immutable simple undirected graph with integer node types in ``1..num_types``.

    Neighbors of node ``i`` are available two ways: ``indices[indptr[i]:indptr[i+1]]``
    sorted by node id, and ``typed_indices`` over the same range grouped by neighbor
    type, where ``type_offsets[i, t-1]:type_offsets[i, t]`` (relative to ``indptr[i]``)
    is the slice of type-``t`` neighbors.

    Use :meth:`from_edges` to build a graph; the constructor stores arrays as given
    and does not validate (see :func:`validate`).
    """

    def __init__(self, indptr, indices, node_type, num_types, labels=None, edge_type=None):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.node_type = np.asarray(node_type, dtype=np.int64)
        self.num_types = int(num_types)
        self.num_nodes = len(self.indptr) - 1
        self.labels = (np.arange(self.num_nodes, dtype=np.int64) if labels is None
                       else np.asarray(labels, dtype=np.int64))

        src = np.repeat(np.arange(self.num_nodes, dtype=np.int64), np.diff(self.indptr))
        upper = src < self.indices
        # edge enumeration: (i, j) with i < j, lexicographic in internal ids
        self.edges = np.column_stack([src[upper], self.indices[upper]])
        self.num_edges = len(self.edges)
        self.edge_type = None if edge_type is None else np.asarray(edge_type, dtype=np.int64)

        nt = self.node_type[self.indices] if len(self.indices) else np.zeros(0, np.int64)
        order = np.lexsort((self.indices, nt, src))
        self.typed_indices = self.indices[order]
        offsets = np.zeros((self.num_nodes, self.num_types + 1), dtype=np.int64)
        if len(nt) and self.num_types > 0:
            counts = np.zeros((self.num_nodes, self.num_types + 1), dtype=np.int64)
            ok = (nt >= 1) & (nt <= self.num_types)
            np.add.at(counts, (src[ok], nt[ok]), 1)
            offsets = np.cumsum(counts, axis=1)
        self.type_offsets = offsets

        hist = np.zeros(self.num_types, dtype=np.int64)
        valid = (self.node_type >= 1) & (self.node_type <= self.num_types)
        np.add.at(hist, self.node_type[valid] - 1, 1)
        self.type_histogram = hist

        for arr in (self.indptr, self.indices, self.node_type, self.labels, self.edges,
                    self.typed_indices, self.type_offsets, self.type_histogram):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, edges, node_type, num_types=None, labels=None, edge_type=None):
        """Build a graph from internal ``(u, v)`` pairs over nodes ``0..len(node_type)-1``.

        Self-loops and duplicate edges (in either orientation) are dropped.
        ``edge_type`` is aligned with ``edges``; the first occurrence of a pair wins.
        """
        node_type = np.asarray(node_type, dtype=np.int64)
        n = len(node_type)
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(edges) and (edges.min() < 0 or edges.max() >= n):
            raise GraphFormatError("edge endpoint outside node range")
        if num_types is None:
            num_types = int(node_type.max()) if n else 0
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        keep = lo != hi
        lo, hi = lo[keep], hi[keep]
        etype = None if edge_type is None else np.asarray(edge_type, dtype=np.int64)[keep]
        code = lo * n + hi
        _, first = np.unique(code, return_index=True)
        first.sort()
        lo, hi = lo[first], hi[first]
        if etype is not None:
            etype = etype[first]

        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        indptr = np.cumsum(indptr)
        if etype is not None:
            # realign edge types to the canonical (i < j) lexicographic enumeration
            eorder = np.lexsort((hi, lo))
            etype = etype[eorder]
        return cls(indptr, dst, node_type, num_types, labels=labels, edge_type=etype)

    def neighbors(self, i):
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def degree(self, i=None):
        deg = np.diff(self.indptr)
        return deg if i is None else int(deg[i])

    @property
    def max_degree(self):
        return int(np.diff(self.indptr).max()) if self.num_nodes else 0

    def typed_neighbors(self, i, t):
        return typed_neighbors(self, i, t)

    def edge_index(self, u, v):
        """Ordinal of internal edge ``{u, v}`` in :attr:`edges`."""
        i, j = (u, v) if u < v else (v, u)
        row = self.edges[:, 0]
        lo = np.searchsorted(row, i, side="left")
        hi = np.searchsorted(row, i, side="right")
        k = lo + np.searchsorted(self.edges[lo:hi, 1], j)
        if k >= hi or self.edges[k, 1] != j:
            raise KeyError(f"({u}, {v}) is not an edge")
        return int(k)

    def internal_id(self, label):
        k = np.searchsorted(self.labels, label)
        if k >= self.num_nodes or self.labels[k] != label:
            raise KeyError(f"unknown node id {label}")
        return int(k)

    def with_types(self, node_type, num_types=None):
        """Same topology with a new type assignment."""
        node_type = np.asarray(node_type, dtype=np.int64)
        if num_types is None:
            num_types = int(node_type.max())
        return HeteroGraph(self.indptr, self.indices, node_type, num_types,
                           labels=self.labels, edge_type=self.edge_type)

    def __repr__(self):
        return (f"HeteroGraph(num_nodes={self.num_nodes}, num_edges={self.num_edges}, "
                f"num_types={self.num_types})")


def typed_neighbors(g, i, t):
    """Sorted neighbors of ``i`` whose type is ``t``."""
    if not 0 <= i < g.num_nodes:
        raise IndexError(f"node {i} out of range [0, {g.num_nodes})")
    if not 1 <= t <= g.num_types:
        raise ValueError(f"type {t} out of range [1, {g.num_types}]")
    base = g.indptr[i]
    off = g.type_offsets[i]
    return g.typed_indices[base + off[t - 1]:base + off[t]]


def validate(g):
    """Return a list of human-readable invariant violations; empty means valid."""
    problems = []
    n = g.num_nodes
    if g.indptr[0] != 0 or np.any(np.diff(g.indptr) < 0) or g.indptr[-1] != len(g.indices):
        problems.append("indptr is not a valid offset array")
        return problems
    if len(g.node_type) != n:
        problems.append(f"node_type has length {len(g.node_type)}, expected {n}")
        return problems
    if len(g.indices) and (g.indices.min() < 0 or g.indices.max() >= n):
        problems.append("neighbor id outside node range")
        return problems

    pairs = set()
    for i in range(n):
        row = g.indices[g.indptr[i]:g.indptr[i + 1]]
        if np.any(row == i):
            problems.append(f"self-loop at node {i}")
        if len(row) > 1 and np.any(np.diff(row) <= 0):
            problems.append(f"neighbor list of node {i} is not strictly increasing")
        pairs.update((i, int(j)) for j in row)
    for i, j in sorted(pairs):
        if (j, i) not in pairs:
            problems.append(f"asymmetric adjacency: {j} in N({i}) but {i} not in N({j})")

    bad = np.flatnonzero((g.node_type < 1) | (g.node_type > g.num_types))
    for i in bad:
        problems.append(f"node {i} has type {g.node_type[i]} outside 1..{g.num_types}")
    # out-of-range types are already reported and would only repeat as a histogram error
    if len(bad) == 0 and int(g.type_histogram.sum()) != n:
        problems.append(f"type histogram sums to {int(g.type_histogram.sum())}, expected {n}")
    return problems


def _data_lines(path):
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if not s or s.startswith(_COMMENT_PREFIXES):
                continue
            yield lineno, s


def _header_says_directed(path):
    with open(path) as fh:
        for line in fh:
            s = line.strip()
            if s and not s.startswith(_COMMENT_PREFIXES):
                return False
            words = s.lstrip("#%").lower().split()
            if "directed" in words or "asym" in words:
                return True
    return False


def load_graph(edge_path, type_path, num_types=None, symmetrize=False):
    """Read an edge list and a node-type file into a validated :class:`HeteroGraph`.

    Node ids may be arbitrary non-negative integers; they are densified in sorted
    order and kept in ``graph.labels``. An optional third edge column is read as an
    edge type. Files whose header comments declare them ``directed``/``asym`` are
    rejected unless ``symmetrize`` is true.
    """
    edge_path, type_path = Path(edge_path), Path(type_path)
    if _header_says_directed(edge_path) and not symmetrize:
        raise GraphFormatError(f"{edge_path}: directed edge list; pass symmetrize=True")

    raw = []
    etypes = []
    for lineno, s in _data_lines(edge_path):
        parts = s.split()
        try:
            if len(parts) not in (2, 3):
                raise ValueError
            vals = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"{edge_path}:{lineno}: malformed edge line {s!r}") from None
        if vals[0] < 0 or vals[1] < 0:
            raise GraphFormatError(f"{edge_path}:{lineno}: negative node id")
        raw.append(vals[:2])
        etypes.append(vals[2] if len(vals) == 3 else 0)
    if not raw:
        raise GraphFormatError("graph has no edges")

    types = {}
    for lineno, s in _data_lines(type_path):
        parts = s.split()
        try:
            if len(parts) != 2:
                raise ValueError
            node, t = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"{type_path}:{lineno}: malformed type line {s!r}") from None
        if t < 1:
            raise GraphFormatError(f"{type_path}:{lineno}: type id {t} < 1")
        types[node] = t

    raw = np.asarray(raw, dtype=np.int64)
    labels = np.union1d(np.unique(raw), np.fromiter(types.keys(), dtype=np.int64))
    missing = [int(v) for v in labels if int(v) not in types]
    if missing:
        raise GraphFormatError(f"node {missing[0]} has no type ({len(missing)} untyped nodes)")
    node_type = np.array([types[int(v)] for v in labels], dtype=np.int64)
    if num_types is None:
        num_types = int(node_type.max())
    elif node_type.max() > num_types:
        raise GraphFormatError(f"type {int(node_type.max())} exceeds num_types={num_types}")

    internal = np.searchsorted(labels, raw)
    has_etype = any(etypes)
    g = HeteroGraph.from_edges(internal, node_type, num_types, labels=labels,
                               edge_type=np.asarray(etypes) if has_etype else None)
    n_loops = int(np.sum(raw[:, 0] == raw[:, 1]))
    n_dups = len(raw) - n_loops - g.num_edges
    if n_loops or n_dups:
        logger.warning("%s: dropped %d self-loops and %d duplicate edges",
                       edge_path, n_loops, n_dups)
    g.dropped_self_loops = n_loops
    g.dropped_duplicates = n_dups
    return g


def write_graph(g, edge_path, type_path):
    """Write ``g`` in the edge/type file formats read by :func:`load_graph`."""
    lab = g.labels
    with open(edge_path, "w") as fh:
        for k, (i, j) in enumerate(g.edges):
            if g.edge_type is not None:
                fh.write(f"{lab[i]} {lab[j]} {g.edge_type[k]}\n")
            else:
                fh.write(f"{lab[i]} {lab[j]}\n")
    with open(type_path, "w") as fh:
        for i in range(g.num_nodes):
            fh.write(f"{lab[i]} {g.node_type[i]}\n")
