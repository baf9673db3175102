"""Per-edge typed graphlet counting for 2-, 3- and 4-node graphlets.

For each edge (i, j) the neighborhoods of i and j are split by node type into
triangle nodes T, and the star sides S_i and S_j. 3-node counts are the sizes of
those sets. Six 4-node orbits are enumerated by walking one more hop out of S_i,
S_j and T; the remaining four (4-path center, 4-star, tailed-triangle apex edge,
chordal-cycle chord) follow in constant time from set sizes minus an enumerated
orbit count.

Two engines share this contract: a readable pure-Python one (``backend="python"``),
and a compiled one in :mod:`hetgraphlets._kernel` used by default.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb

import numpy as np

from . import keys as K
from .storage import LocalCountTable, merge_segments

UNMARKED, STAR_I, STAR_J, TRI, ENDPOINT = 0, 1, 2, 3, 4


class ConsistencyError(RuntimeError):
    """An internal counting identity was violated (indicates a bug, never bad input)."""


class EdgeWorkspace:
    """Reusable per-worker scratch for one edge at a time.

    ``tri``, ``star_i`` and ``star_j`` map a type to the list of nodes of that type.
    Node marks are epoch-stamped, so :meth:`reset` is O(1) rather than O(N).
    """

    def __init__(self, g):
        self.g = g
        self._indptr = g.indptr.tolist()
        self._indices = g.indices.tolist()
        self._type = g.node_type.tolist()
        self._stamp = [0] * g.num_nodes
        self._kind = [UNMARKED] * g.num_nodes
        self._epoch = 1
        self.edge = None
        self.mode = K.TYPED
        self.tri = {}
        self.star_i = {}
        self.star_j = {}
        self.acc = {}

    def reset(self):
        self._epoch += 1
        self.edge = None
        self.tri, self.star_i, self.star_j = {}, {}, {}
        self.acc = {}

    def mark(self, v, kind):
        self._stamp[v] = self._epoch
        self._kind[v] = kind

    def classify(self, v):
        return self._kind[v] if self._stamp[v] == self._epoch else UNMARKED

    def sizes(self, part):
        return {t: len(nodes) for t, nodes in part.items()}

    def _emit(self, orbit, roles, count=1, side=0):
        # typed mode accumulates canonical keys directly; position-aware mode keeps the
        # raw role tuple plus the endpoint side (the two sides coincide when both
        # endpoints share a type) so role-resolved subtrahends stay addressable
        if self.mode == K.TYPED:
            key = K.canonicalize_typed(orbit, roles)
        else:
            key = (orbit, side, tuple(roles))
        self.acc[key] = self.acc.get(key, 0) + count

    def _get(self, orbit, roles, side=0):
        if self.mode == K.TYPED:
            return self.acc.get(K.canonicalize_typed(orbit, roles), 0)
        return self.acc.get((orbit, side, tuple(roles)), 0)


@dataclass
class EdgeTypedCounts:
    edge: int
    entries: list

    def as_dict(self):
        return dict(self.entries)


def compute_typed_sets(g, e, w, mode=K.TYPED):
    """Fill ``w`` with the typed triangle and star sets of edge ``e`` and emit 3-node counts."""
    i, j = (int(x) for x in g.edges[e])
    w.edge = e
    w.mode = mode
    ptr, adj, typ = w._indptr, w._indices, w._type
    w.mark(i, ENDPOINT)
    w.mark(j, ENDPOINT)
    for v in adj[ptr[i]:ptr[i + 1]]:
        if v != j:
            w.mark(v, STAR_I)
    for v in adj[ptr[j]:ptr[j + 1]]:
        if v == i:
            continue
        if w.classify(v) == STAR_I:
            w.mark(v, TRI)
            w.tri.setdefault(typ[v], []).append(v)
        else:
            w.mark(v, STAR_J)
            w.star_j.setdefault(typ[v], []).append(v)
    for v in adj[ptr[i]:ptr[i + 1]]:
        if w.classify(v) == STAR_I:
            w.star_i.setdefault(typ[v], []).append(v)

    pi, pj = typ[i], typ[j]
    w._emit(0, (pi, pj))
    for t, nodes in w.tri.items():
        w._emit(2, (pi, pj, t), len(nodes))
    for t, nodes in w.star_i.items():
        w._emit(1, (pi, pj, t), len(nodes))
    for t, nodes in w.star_j.items():
        w._emit(1, (pj, pi, t), len(nodes), side=1)


def count_path_based(g, e, w):
    """Enumerate 4-path end-edge, tailed-triangle tail-edge and 4-cycle orbits."""
    i, j = (int(x) for x in g.edges[e])
    ptr, adj, typ = w._indptr, w._indices, w._type
    pi, pj = typ[i], typ[j]
    for nodes in w.star_i.values():
        for wk in nodes:
            tk = typ[wk]
            for wr in adj[ptr[wk]:ptr[wk + 1]]:
                kind = w.classify(wr)
                if kind == UNMARKED:
                    w._emit(3, (pj, pi, tk, typ[wr]))
                elif kind == STAR_I and wr < wk:
                    w._emit(7, (pi, pj, tk, typ[wr]))
    for nodes in w.star_j.values():
        for wk in nodes:
            tk = typ[wk]
            for wr in adj[ptr[wk]:ptr[wk + 1]]:
                kind = w.classify(wr)
                if kind == UNMARKED:
                    w._emit(3, (pi, pj, tk, typ[wr]), side=1)
                elif kind == STAR_J and wr < wk:
                    w._emit(7, (pj, pi, tk, typ[wr]), side=1)
                elif kind == STAR_I:
                    w._emit(6, (pi, pj, tk, typ[wr]))


def count_triangle_based(g, e, w):
    """Enumerate 4-clique, chordal-cycle rim-edge and tailed-triangle center orbits."""
    i, j = (int(x) for x in g.edges[e])
    ptr, adj, typ = w._indptr, w._indices, w._type
    pi, pj = typ[i], typ[j]
    for nodes in w.tri.values():
        for wk in nodes:
            tk = typ[wk]
            for wr in adj[ptr[wk]:ptr[wk + 1]]:
                kind = w.classify(wr)
                if kind == TRI:
                    if wr < wk:
                        w._emit(12, (pi, pj, tk, typ[wr]))
                elif kind == STAR_I:
                    w._emit(10, (pj, pi, tk, typ[wr]))
                elif kind == STAR_J:
                    w._emit(10, (pi, pj, tk, typ[wr]), side=1)
                elif kind == UNMARKED:
                    w._emit(8, (pi, pj, tk, typ[wr]))


def _store(w, orbit, roles, value, side=0):
    if value < 0:
        raise ConsistencyError(
            f"edge {w.edge}: derived orbit {orbit} count {value} < 0 for types {roles}")
    if value:
        w._emit(orbit, roles, value, side)


def derive_constant_time(w, L=None):
    """Derive 4-path center, 4-star, tailed-triangle apex-edge and chord orbits."""
    i, j = (int(x) for x in w.g.edges[w.edge])
    pi, pj = w._type[i], w._type[j]
    si, sj, tr = w.sizes(w.star_i), w.sizes(w.star_j), w.sizes(w.tri)

    if w.mode == K.TYPED:
        present = sorted(set(si) | set(sj) | set(tr))
        for x, t in enumerate(present):
            for u in present[x:]:
                v = (pi, pj, t, u)
                Si_t, Si_u = si.get(t, 0), si.get(u, 0)
                Sj_t, Sj_u = sj.get(t, 0), sj.get(u, 0)
                T_t, T_u = tr.get(t, 0), tr.get(u, 0)
                if t == u:
                    f4 = Si_t * Sj_t
                    f5 = comb(Si_t, 2) + comb(Sj_t, 2)
                    f9 = T_t * (Si_t + Sj_t)
                    f11 = comb(T_t, 2)
                else:
                    f4 = Si_t * Sj_u + Si_u * Sj_t
                    f5 = Si_t * Si_u + Sj_t * Sj_u
                    f9 = T_t * (Si_u + Sj_u) + T_u * (Si_t + Sj_t)
                    f11 = T_t * T_u
                _store(w, 4, v, f4 - w._get(6, v))
                _store(w, 5, v, f5 - w._get(7, v))
                _store(w, 9, v, f9 - w._get(10, v))
                _store(w, 11, v, f11 - w._get(12, v))
        return

    # position-aware: same identities, one per ordered role assignment
    for a, na in sj.items():
        for b, nb in si.items():
            _store(w, 4, (pi, pj, a, b), na * nb - w._get(6, (pi, pj, a, b)))
    for s, sizes, (p, q) in ((0, si, (pi, pj)), (1, sj, (pj, pi))):
        ts = sorted(sizes)
        for x, a in enumerate(ts):
            for b in ts[x:]:
                if a == b:
                    base = comb(sizes[a], 2)
                    sub = w._get(7, (p, q, a, a), s)
                else:
                    base = sizes[a] * sizes[b]
                    sub = w._get(7, (p, q, a, b), s) + w._get(7, (p, q, b, a), s)
                _store(w, 5, (p, q, a, b), base - sub, s)
    for a, na in tr.items():
        for b, nb in si.items():
            _store(w, 9, (pi, pj, a, b), na * nb - w._get(10, (pj, pi, a, b), 0), 0)
        for b, nb in sj.items():
            _store(w, 9, (pj, pi, a, b), na * nb - w._get(10, (pi, pj, a, b), 1), 1)
    ts = sorted(tr)
    for x, a in enumerate(ts):
        for b in ts[x:]:
            if a == b:
                base = comb(tr[a], 2)
                sub = w._get(12, (pi, pj, a, a))
            else:
                base = tr[a] * tr[b]
                sub = w._get(12, (pi, pj, a, b)) + w._get(12, (pi, pj, b, a))
            _store(w, 11, (pi, pj, a, b), base - sub)


def count_edge(g, e, w=None, mode=K.TYPED):
    """All nonzero orbit-level typed graphlet counts on edge ``e``, sorted by key."""
    if mode not in K.MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if w is None:
        w = EdgeWorkspace(g)
    w.reset()
    compute_typed_sets(g, e, w, mode)
    count_path_based(g, e, w)
    count_triangle_based(g, e, w)
    derive_constant_time(w, g.num_types)
    if mode == K.TYPED:
        entries = sorted((k, c) for k, c in w.acc.items() if c)
    else:
        merged = {}
        for (orbit, _, roles), c in w.acc.items():
            if c:
                key = K.canonicalize_position_aware(orbit, roles)
                merged[key] = merged.get(key, 0) + c
        entries = sorted(merged.items())
    w.reset()
    return EdgeTypedCounts(e, entries)


def _python_range(g, mode, lo, hi):
    w = EdgeWorkspace(g)
    return [count_edge(g, e, w, mode).entries for e in range(lo, hi)]


def _chunks(m, workers):
    n = max(1, min(m, workers * 4))
    bounds = np.linspace(0, m, n + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _count_python(g, mode, workers):
    chunks = _chunks(g.num_edges, workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: _python_range(g, mode, *c), chunks))
    L = g.num_types
    offsets = [0]
    hashes, counts = [], []
    for part in parts:
        for entries in part:
            for k, c in entries:
                hashes.append(K.encode(k, L))
                counts.append(c)
            offsets.append(len(hashes))
    offsets = np.asarray(offsets, dtype=np.int64)
    hashes = np.asarray(hashes, dtype=np.int64)
    counts = np.asarray(counts, dtype=np.int64)
    return merge_segments(offsets, hashes, counts)


def count_all(g, mode=K.TYPED, workers=1, backend="auto"):
    """Orbit-level counts for every edge of ``g`` as a :class:`LocalCountTable`.

    The result does not depend on ``workers``: each edge is counted independently
    and written to its own slot in edge order.
    """
    if mode not in K.MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if backend not in ("auto", "python", "numba"):
        raise ValueError(f"unknown backend {backend!r}")
    if g.num_edges == 0:
        offsets = np.zeros(1, np.int64)
        hashes = counts = np.zeros(0, np.int64)
    elif backend == "python":
        offsets, hashes, counts = _count_python(g, mode, workers)
    else:
        from ._kernel import count_compiled
        offsets, hashes, counts = count_compiled(g, mode, workers)
    return LocalCountTable(mode=mode, L=g.num_types, N=g.num_nodes,
                           endpoints=g.labels[g.edges], offsets=offsets,
                           keys=hashes, counts=counts, level="orbit")


def orbits_to_graphlets(table):
    """Merge orbit-level counts into graphlet-level counts on every edge."""
    if table.level == "graphlet":
        return table
    uniq, inv = np.unique(table.keys, return_inverse=True)
    mapped = np.array([K.encode(K.to_graphlet_key(K.decode(h, table.L, table.mode)), table.L)
                       for h in uniq], dtype=np.int64)
    offsets, hashes, counts = merge_segments(table.offsets, mapped[inv].reshape(-1), table.counts)
    return LocalCountTable(mode=table.mode, L=table.L, N=table.N, endpoints=table.endpoints,
                           offsets=offsets, keys=hashes, counts=counts, level="graphlet")


def edge_set_sizes(g, e):
    """``(|T|, |S_i|, |S_j|)`` for edge ``e`` plus per-type breakdowns, for identity checks."""
    w = EdgeWorkspace(g)
    compute_typed_sets(g, e, w)
    return w.sizes(w.tri), w.sizes(w.star_i), w.sizes(w.star_j)
