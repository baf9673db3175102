"""Brute-force reference counts: enumerate every connected induced subgraph on 2-4 nodes.

Deliberately simple and slow. Orbit roles are found by trying every ordering of an
instance's nodes against per-orbit role patterns, so nothing here reuses the
counting engine's per-orbit rules.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import keys as K
from .storage import LocalCountTable, merge_segments

DEFAULT_MAX_NODES = 100

# edges among role positions, anchored edge = positions (0, 1); mirrors keys module doc
ORBIT_PATTERNS = {
    0: ((0, 1),),
    1: ((0, 1), (0, 2)),
    2: ((0, 1), (0, 2), (1, 2)),
    3: ((0, 1), (1, 2), (2, 3)),
    4: ((0, 1), (1, 2), (0, 3)),
    5: ((0, 1), (0, 2), (0, 3)),
    6: ((0, 1), (1, 2), (2, 3), (0, 3)),
    7: ((0, 1), (0, 2), (0, 3), (2, 3)),
    8: ((0, 1), (0, 2), (1, 2), (2, 3)),
    9: ((0, 1), (0, 2), (1, 2), (0, 3)),
    10: ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3)),
    11: ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3)),
    12: ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)),
}
# orbits whose position-aware key ignores which instance edge is the anchor
_UNANCHORED = {0, 1, 2}


class OracleRefused(RuntimeError):
    pass


class DisconnectedError(ValueError):
    pass


def classify_shape(nodes, adj):
    """Shape id and per-node degree within the induced subgraph.

    ``adj`` is a set of frozenset pairs (or any container supporting ``in``).
    """
    nodes = list(nodes)
    k = len(nodes)
    deg = {v: 0 for v in nodes}
    edges = []
    for a, b in itertools.combinations(nodes, 2):
        if frozenset((a, b)) in adj:
            deg[a] += 1
            deg[b] += 1
            edges.append((a, b))
    # connectivity by flood fill
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        x = stack.pop()
        for a, b in edges:
            for p, q in ((a, b), (b, a)):
                if p == x and q not in seen:
                    seen.add(q)
                    stack.append(q)
    if len(seen) != k:
        raise DisconnectedError(f"nodes {nodes} do not induce a connected subgraph")
    m = len(edges)
    degseq = tuple(sorted(deg.values()))
    if k == 2:
        shape = 0
    elif k == 3:
        shape = 2 if m == 3 else 1
    elif m == 3:
        shape = 3 if degseq == (1, 1, 2, 2) else 4
    elif m == 4:
        shape = 5 if degseq == (2, 2, 2, 2) else 6
    elif m == 5:
        shape = 7
    else:
        shape = 8
    return shape, deg


def edge_orbit(shape, deg, u, v):
    """Orbit of instance edge (u, v) from the endpoint degrees inside the instance."""
    du, dv = sorted((deg[u], deg[v]))
    if shape <= 2:
        return shape
    if shape == 3:
        return 3 if du == 1 else 4
    if shape == 4:
        return 5
    if shape == 5:
        return 6
    if shape == 6:
        if du == 1:
            return 7
        return 8 if (du, dv) == (2, 2) else 9
    if shape == 7:
        return 11 if (du, dv) == (3, 3) else 10
    return 12


def _mask(nodes, adj):
    bits = 0
    for n, (a, b) in enumerate(itertools.combinations(range(len(nodes)), 2)):
        if frozenset((nodes[a], nodes[b])) in adj:
            bits |= 1 << n
    return bits


@lru_cache(maxsize=None)
def _matching_perms(k, mask, pattern, anchor):
    """Orderings of local positions that realize ``pattern`` on an instance with ``mask``.

    With ``anchor`` given, the first two positions must be that local pair.
    """
    pattern = {frozenset(p) for p in pattern}
    pairs = list(itertools.combinations(range(k), 2))
    present = {frozenset(pairs[n]) for n in range(len(pairs)) if mask >> n & 1}
    out = []
    for perm in itertools.permutations(range(k)):
        if anchor is not None and {perm[0], perm[1]} != set(anchor):
            continue
        if all((frozenset((perm[a], perm[b])) in present) == (frozenset((a, b)) in pattern)
               for a, b in pairs):
            out.append(perm)
    return tuple(out)


def _best_labeling(nodes, types, mask, pattern, anchor):
    perms = _matching_perms(len(nodes), mask, pattern, anchor)
    if not perms:
        raise AssertionError(f"pattern {pattern} does not match instance {nodes}")
    return min(tuple(types[nodes[p]] for p in perm) for perm in perms)


def _role_key(nodes, types, mask, orbit, anchor, mode):
    if orbit in _UNANCHORED:
        anchor = None
    best = _best_labeling(nodes, types, mask, ORBIT_PATTERNS[orbit], anchor)
    if mode == K.TYPED:
        return K.GraphletKey(orbit, tuple(sorted(best)), K.TYPED)
    return K.GraphletKey(orbit, best, K.POSITION_AWARE)


def _graphlet_key(nodes, types, mask, shape, mode):
    rep = K.REPRESENTATIVE_ORBIT[shape]
    if mode == K.TYPED:
        return K.GraphletKey(rep, tuple(sorted(types[x] for x in nodes)), K.TYPED)
    best = _best_labeling(nodes, types, mask, K.SHAPE_PATTERNS[shape], None)
    return K.GraphletKey(rep, best, K.POSITION_AWARE)


def induced_instances(g):
    """Yield node tuples of every connected induced subgraph with 2-4 nodes (each once)."""
    nbrs = [set(g.neighbors(i).tolist()) for i in range(g.num_nodes)]
    found = set()
    for i, j in g.edges.tolist():
        base = frozenset((i, j))
        found.add(base)
        ext1 = (nbrs[i] | nbrs[j]) - base
        for x in ext1:
            s3 = base | {x}
            found.add(s3)
            ext2 = (nbrs[i] | nbrs[j] | nbrs[x]) - s3
            for y in ext2:
                found.add(s3 | {y})
    for s in sorted(found, key=lambda s: (len(s), sorted(s))):
        yield tuple(sorted(s))


def oracle_counts(g, mode=K.TYPED, level="orbit", max_nodes=DEFAULT_MAX_NODES):
    """Per-edge counts by exhaustive enumeration; same layout as the engine's table."""
    if g.num_nodes > max_nodes:
        raise OracleRefused(f"oracle limited to {max_nodes} nodes, graph has {g.num_nodes}")
    if mode not in K.MODES:
        raise ValueError(f"unknown mode {mode!r}")
    adj = {frozenset(e) for e in g.edges.tolist()}
    types = g.node_type.tolist()
    per_edge = [dict() for _ in range(g.num_edges)]
    for nodes in induced_instances(g):
        shape, deg = classify_shape(nodes, adj)
        mask = _mask(nodes, adj)
        gkey = _graphlet_key(nodes, types, mask, shape, mode) if level == "graphlet" else None
        for a, b in itertools.combinations(range(len(nodes)), 2):
            u, v = nodes[a], nodes[b]
            if frozenset((u, v)) not in adj:
                continue
            if gkey is None:
                key = _role_key(nodes, types, mask, edge_orbit(shape, deg, u, v), (a, b), mode)
            else:
                key = gkey
            h = K.encode(key, g.num_types)
            d = per_edge[g.edge_index(u, v)]
            d[h] = d.get(h, 0) + 1
    offsets = [0]
    hashes, counts = [], []
    for d in per_edge:
        for h in sorted(d):
            hashes.append(h)
            counts.append(d[h])
        offsets.append(len(hashes))
    offsets, hashes, counts = merge_segments(np.asarray(offsets, np.int64),
                                             np.asarray(hashes, np.int64),
                                             np.asarray(counts, np.int64))
    return LocalCountTable(mode=mode, L=g.num_types, N=g.num_nodes,
                           endpoints=g.labels[g.edges], offsets=offsets,
                           keys=hashes, counts=counts, level=level)
