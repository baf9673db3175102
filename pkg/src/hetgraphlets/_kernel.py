"""Compiled per-edge counting kernel.

Edges are split into contiguous chunks; each chunk runs in a ``nogil`` numba
function on its own thread with private scratch arrays, and chunk outputs are
concatenated in edge order, so results never depend on scheduling.

The kernel emits *raw* codes that pin every role exactly:
``((((orbit*2 + side)*R + type_i)*R + type_j)*R + a)*R + b`` with ``R = L + 1``.
``side`` tells which endpoint a one-sided orbit hangs off; ``a``/``b`` are the
types of the extra nodes. Raw codes are turned into canonical key hashes on the
Python side (there are few distinct ones), then merged per edge.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numba as nb
import numpy as np

from . import keys as K
from .storage import merge_segments

_UNMARKED, _STAR_I, _STAR_J, _TRI, _ENDPOINT = 0, 1, 2, 3, 4
_CHUNK_EDGES = 4096


@nb.njit(inline="always")
def _raw(orbit, side, pi, pj, a, b, R):
    return ((((orbit * 2 + side) * R + pi) * R + pj) * R + a) * R + b


@nb.njit(inline="always")
def _lookup(keys, counts, n, code):
    k = np.searchsorted(keys[:n], code)
    if k < n and keys[k] == code:
        return counts[k]
    return 0


@nb.njit(nogil=True, cache=True)
def _count_range(indptr, indices, node_type, edges, lo, hi, L, num_nodes):
    R = L + 1
    stamp = np.full(num_nodes, -1, np.int64)
    kind = np.zeros(num_nodes, np.int8)
    cnt_t = np.zeros(R, np.int64)
    cnt_i = np.zeros(R, np.int64)
    cnt_j = np.zeros(R, np.int64)
    maxdeg = 0
    for v in range(num_nodes):
        d = indptr[v + 1] - indptr[v]
        if d > maxdeg:
            maxdeg = d
    tri = np.empty(maxdeg, np.int64)
    star_i = np.empty(maxdeg, np.int64)
    star_j = np.empty(maxdeg, np.int64)
    types_t = np.empty(R, np.int64)
    types_i = np.empty(R, np.int64)
    types_j = np.empty(R, np.int64)

    buf = np.empty(1024, np.int64)
    enum_k = np.empty(1024, np.int64)
    enum_c = np.empty(1024, np.int64)
    out_k = np.empty(16 * (hi - lo) + 16, np.int64)
    out_c = np.empty(16 * (hi - lo) + 16, np.int64)
    offsets = np.zeros(hi - lo + 1, np.int64)
    nout = 0

    for e in range(lo, hi):
        i = edges[e, 0]
        j = edges[e, 1]
        pi = node_type[i]
        pj = node_type[j]
        stamp[i] = e
        kind[i] = _ENDPOINT
        stamp[j] = e
        kind[j] = _ENDPOINT
        nt = 0
        ni = 0
        nj = 0
        for p in range(indptr[i], indptr[i + 1]):
            v = indices[p]
            if v != j:
                stamp[v] = e
                kind[v] = _STAR_I
        for p in range(indptr[j], indptr[j + 1]):
            v = indices[p]
            if v == i:
                continue
            if stamp[v] == e and kind[v] == _STAR_I:
                kind[v] = _TRI
                tri[nt] = v
                nt += 1
            else:
                stamp[v] = e
                kind[v] = _STAR_J
                star_j[nj] = v
                nj += 1
        for p in range(indptr[i], indptr[i + 1]):
            v = indices[p]
            if v != j and kind[v] == _STAR_I:
                star_i[ni] = v
                ni += 1

        # typed set sizes and the list of types present in each set
        n_tt = 0
        n_ti = 0
        n_tj = 0
        for x in range(nt):
            t = node_type[tri[x]]
            if cnt_t[t] == 0:
                types_t[n_tt] = t
                n_tt += 1
            cnt_t[t] += 1
        for x in range(ni):
            t = node_type[star_i[x]]
            if cnt_i[t] == 0:
                types_i[n_ti] = t
                n_ti += 1
            cnt_i[t] += 1
        for x in range(nj):
            t = node_type[star_j[x]]
            if cnt_j[t] == 0:
                types_j[n_tj] = t
                n_tj += 1
            cnt_j[t] += 1
        types_t[:n_tt].sort()
        types_i[:n_ti].sort()
        types_j[:n_tj].sort()

        # enumerate path- and triangle-based orbits into buf
        bound = 0
        for x in range(ni):
            v = star_i[x]
            bound += indptr[v + 1] - indptr[v]
        for x in range(nj):
            v = star_j[x]
            bound += indptr[v + 1] - indptr[v]
        for x in range(nt):
            v = tri[x]
            bound += indptr[v + 1] - indptr[v]
        if bound > len(buf):
            buf = np.empty(2 * bound, np.int64)
        ne = 0
        for x in range(ni):
            wk = star_i[x]
            tk = node_type[wk]
            for p in range(indptr[wk], indptr[wk + 1]):
                wr = indices[p]
                c = kind[wr] if stamp[wr] == e else _UNMARKED
                if c == _UNMARKED:
                    buf[ne] = _raw(3, 0, pi, pj, tk, node_type[wr], R)
                    ne += 1
                elif c == _STAR_I and wr < wk:
                    buf[ne] = _raw(7, 0, pi, pj, tk, node_type[wr], R)
                    ne += 1
        for x in range(nj):
            wk = star_j[x]
            tk = node_type[wk]
            for p in range(indptr[wk], indptr[wk + 1]):
                wr = indices[p]
                c = kind[wr] if stamp[wr] == e else _UNMARKED
                if c == _UNMARKED:
                    buf[ne] = _raw(3, 1, pi, pj, tk, node_type[wr], R)
                    ne += 1
                elif c == _STAR_J:
                    if wr < wk:
                        buf[ne] = _raw(7, 1, pi, pj, tk, node_type[wr], R)
                        ne += 1
                elif c == _STAR_I:
                    buf[ne] = _raw(6, 0, pi, pj, tk, node_type[wr], R)
                    ne += 1
        for x in range(nt):
            wk = tri[x]
            tk = node_type[wk]
            for p in range(indptr[wk], indptr[wk + 1]):
                wr = indices[p]
                c = kind[wr] if stamp[wr] == e else _UNMARKED
                if c == _TRI:
                    if wr < wk:
                        buf[ne] = _raw(12, 0, pi, pj, tk, node_type[wr], R)
                        ne += 1
                elif c == _STAR_I:
                    buf[ne] = _raw(10, 0, pi, pj, tk, node_type[wr], R)
                    ne += 1
                elif c == _STAR_J:
                    buf[ne] = _raw(10, 1, pi, pj, tk, node_type[wr], R)
                    ne += 1
                elif c == _UNMARKED:
                    buf[ne] = _raw(8, 0, pi, pj, tk, node_type[wr], R)
                    ne += 1

        srt = np.sort(buf[:ne])
        if ne > len(enum_k):
            enum_k = np.empty(2 * ne, np.int64)
            enum_c = np.empty(2 * ne, np.int64)
        nu = 0
        for x in range(ne):
            if nu > 0 and enum_k[nu - 1] == srt[x]:
                enum_c[nu - 1] += 1
            else:
                enum_k[nu] = srt[x]
                enum_c[nu] = 1
                nu += 1

        # worst-case entries this edge can add: 3-node + enumerated + derived
        need = 1 + n_tt + n_ti + n_tj + nu + n_ti * n_tj + n_ti * n_ti + n_tj * n_tj \
            + n_tt * (n_ti + n_tj) + n_tt * n_tt
        if nout + need > len(out_k):
            cap = 2 * (nout + need)
            nk = np.empty(cap, np.int64)
            nc = np.empty(cap, np.int64)
            nk[:nout] = out_k[:nout]
            nc[:nout] = out_c[:nout]
            out_k = nk
            out_c = nc

        out_k[nout] = _raw(0, 0, pi, pj, 0, 0, R)
        out_c[nout] = 1
        nout += 1
        for x in range(n_tt):
            t = types_t[x]
            out_k[nout] = _raw(2, 0, pi, pj, t, 0, R)
            out_c[nout] = cnt_t[t]
            nout += 1
        for x in range(n_ti):
            t = types_i[x]
            out_k[nout] = _raw(1, 0, pi, pj, t, 0, R)
            out_c[nout] = cnt_i[t]
            nout += 1
        for x in range(n_tj):
            t = types_j[x]
            out_k[nout] = _raw(1, 1, pi, pj, t, 0, R)
            out_c[nout] = cnt_j[t]
            nout += 1
        for x in range(nu):
            out_k[nout] = enum_k[x]
            out_c[nout] = enum_c[x]
            nout += 1

        bad = False
        # 4-path center: a = type on j's side, b = type on i's side
        for x in range(n_tj):
            a = types_j[x]
            for y in range(n_ti):
                b = types_i[y]
                v = cnt_j[a] * cnt_i[b] - _lookup(enum_k, enum_c, nu, _raw(6, 0, pi, pj, a, b, R))
                if v < 0:
                    bad = True
                elif v > 0:
                    out_k[nout] = _raw(4, 0, pi, pj, a, b, R)
                    out_c[nout] = v
                    nout += 1
        # 4-star on each side
        for side in range(2):
            cnt = cnt_i if side == 0 else cnt_j
            tys = types_i if side == 0 else types_j
            nty = n_ti if side == 0 else n_tj
            for x in range(nty):
                a = tys[x]
                for y in range(x, nty):
                    b = tys[y]
                    if a == b:
                        base = cnt[a] * (cnt[a] - 1) // 2
                        sub = _lookup(enum_k, enum_c, nu, _raw(7, side, pi, pj, a, a, R))
                    else:
                        base = cnt[a] * cnt[b]
                        sub = _lookup(enum_k, enum_c, nu, _raw(7, side, pi, pj, a, b, R)) \
                            + _lookup(enum_k, enum_c, nu, _raw(7, side, pi, pj, b, a, R))
                    v = base - sub
                    if v < 0:
                        bad = True
                    elif v > 0:
                        out_k[nout] = _raw(5, side, pi, pj, a, b, R)
                        out_c[nout] = v
                        nout += 1
        # tailed-triangle apex edge: a = triangle node type, b = pendant type
        for x in range(n_tt):
            a = types_t[x]
            for side in range(2):
                cnt = cnt_i if side == 0 else cnt_j
                tys = types_i if side == 0 else types_j
                nty = n_ti if side == 0 else n_tj
                for y in range(nty):
                    b = tys[y]
                    v = cnt_t[a] * cnt[b] - _lookup(enum_k, enum_c, nu, _raw(10, side, pi, pj, a, b, R))
                    if v < 0:
                        bad = True
                    elif v > 0:
                        out_k[nout] = _raw(9, side, pi, pj, a, b, R)
                        out_c[nout] = v
                        nout += 1
        # chordal-cycle chord
        for x in range(n_tt):
            a = types_t[x]
            for y in range(x, n_tt):
                b = types_t[y]
                if a == b:
                    base = cnt_t[a] * (cnt_t[a] - 1) // 2
                    sub = _lookup(enum_k, enum_c, nu, _raw(12, 0, pi, pj, a, a, R))
                else:
                    base = cnt_t[a] * cnt_t[b]
                    sub = _lookup(enum_k, enum_c, nu, _raw(12, 0, pi, pj, a, b, R)) \
                        + _lookup(enum_k, enum_c, nu, _raw(12, 0, pi, pj, b, a, R))
                v = base - sub
                if v < 0:
                    bad = True
                elif v > 0:
                    out_k[nout] = _raw(11, 0, pi, pj, a, b, R)
                    out_c[nout] = v
                    nout += 1

        for x in range(n_tt):
            cnt_t[types_t[x]] = 0
        for x in range(n_ti):
            cnt_i[types_i[x]] = 0
        for x in range(n_tj):
            cnt_j[types_j[x]] = 0
        offsets[e - lo + 1] = nout
        if bad:
            return offsets, out_k[:nout], out_c[:nout], e
    return offsets, out_k[:nout], out_c[:nout], -1


# which raw sides mean "swap i and j" when listing roles
_SWAP_ON_SIDE1 = {1, 5, 7, 9}
_SWAP_ON_SIDE0 = {3, 10}


def raw_roles(code, L):
    """Decode a raw kernel code into ``(orbit, role-ordered types)``."""
    R = L + 1
    code, b = divmod(int(code), R)
    code, a = divmod(code, R)
    code, pj = divmod(code, R)
    code, pi = divmod(code, R)
    orbit, side = divmod(code, 2)
    swap = (side == 1 and orbit in _SWAP_ON_SIDE1) or (side == 0 and orbit in _SWAP_ON_SIDE0)
    p, q = (pj, pi) if swap else (pi, pj)
    roles = (p, q) + ((a,) if K.ORBIT_SIZE[orbit] >= 3 else ()) + \
        ((b,) if K.ORBIT_SIZE[orbit] == 4 else ())
    return orbit, roles


def count_compiled(g, mode, workers):
    """``(offsets, hashes, counts)`` for every edge of ``g`` at orbit level."""
    L = g.num_types
    if (L + 1) ** 4 * 26 >= 2 ** 63:
        raise ValueError(f"num_types={L} too large for the compiled kernel")
    m = g.num_edges
    chunks = [(lo, min(lo + _CHUNK_EDGES, m)) for lo in range(0, m, _CHUNK_EDGES)]
    args = (g.indptr, g.indices, g.node_type, np.ascontiguousarray(g.edges))

    # raw code -> canonical hash; shared by workers, every writer stores the same value
    cache = {}

    def run(c):
        off, raw, cnt, err = _count_range(*args, c[0], c[1], L, g.num_nodes)
        if err >= 0:
            return None, err
        uniq, inv = np.unique(raw, return_inverse=True)
        hashes = np.empty(len(uniq), np.int64)
        for x, code in enumerate(uniq.tolist()):
            h = cache.get(code)
            if h is None:
                orbit, roles = raw_roles(code, L)
                h = cache[code] = K.encode(K.canonicalize(orbit, roles, mode), L)
            hashes[x] = h
        # merging per chunk keeps peak memory near the final table size
        return merge_segments(off, hashes[inv.reshape(-1)], cnt), -1

    if workers == 1 or len(chunks) == 1:
        parts = [run(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))

    for _, err in parts:
        if err >= 0:
            from .counting import ConsistencyError
            raise ConsistencyError(f"edge {err}: derived orbit count < 0")

    offsets = np.zeros(m + 1, np.int64)
    pos, base = 1, 0
    for (off, _, _), _ in parts:
        offsets[pos:pos + len(off) - 1] = off[1:] + base
        pos += len(off) - 1
        base += off[-1]
    hashes = np.concatenate([p[0][1] for p in parts])
    counts = np.concatenate([p[0][2] for p in parts])
    return offsets, hashes, counts
