"""Seeded synthetic graphs and type assignments.

All randomness comes from ``numpy.random.default_rng(seed)`` (PCG64), so a seed
fixes the output bit for bit. Edge lists are returned as ``(M, 2)`` int64 arrays
with ``u < v``, sorted lexicographically.
"""

from __future__ import annotations

import math

import numpy as np

from .graph import HeteroGraph


def _pairs_from_index(k, n):
    """Map lexicographic pair indices to ``(u, v)`` with ``u < v < n``."""
    k = np.asarray(k, dtype=np.int64)
    # row u starts at u*n - u*(u+1)/2 - ... solve the quadratic, then fix rounding
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(b * b - 8.0 * k)) / 2).astype(np.int64)
    start = u * (2 * n - u - 1) // 2
    over = start > k
    u[over] -= 1
    start = u * (2 * n - u - 1) // 2
    nxt = (u + 1) * (2 * n - u - 2) // 2
    under = k >= nxt
    u[under] += 1
    start = u * (2 * n - u - 1) // 2
    v = k - start + u + 1
    return np.column_stack([u, v])


def _finish(edges):
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if len(edges) == 0:
        return edges
    edges = np.column_stack([edges.min(axis=1), edges.max(axis=1)])
    edges = np.unique(edges, axis=0)
    return edges


def gen_er(n, p, seed):
    """Erdos-Renyi G(n, p): each of the n(n-1)/2 pairs independently with probability p.

    Uses geometric skips between selected pair indices, so cost is O(n + M).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if p == 1.0:
        return _pairs_from_index(np.arange(total), n)
    rng = np.random.default_rng(seed)
    picked = []
    pos = -1
    expect = total * p
    batch = int(expect + 6 * math.sqrt(expect) + 64)
    while True:
        gaps = rng.geometric(p, size=batch)
        idx = pos + np.cumsum(gaps)
        if idx[-1] >= total:
            picked.append(idx[idx < total])
            break
        picked.append(idx)
        pos = int(idx[-1])
        batch = max(64, batch // 4)
    return _pairs_from_index(np.concatenate(picked), n)


def power_law_weights(n, exponent, mean_degree):
    """Expected-degree weights ``w_i ~ (i+1)^(-1/(exponent-1))`` scaled to ``mean_degree``."""
    if exponent <= 1:
        raise ValueError("exponent must be > 1")
    w = np.arange(1, n + 1, dtype=np.float64) ** (-1.0 / (exponent - 1.0))
    return w * (mean_degree * n / w.sum())


def gen_chung_lu(n, seed, weights=None, exponent=None, mean_degree=10.0):
    """Chung-Lu graph: pair (u, v) present with probability ``min(1, w_u w_v / sum(w))``.

    Give explicit ``weights`` or a power-law ``exponent`` (with ``mean_degree``).
    Sampling skips geometrically over pairs in descending-weight order, which is
    exact and runs in O(n + M).
    """
    if weights is None:
        if exponent is None:
            raise ValueError("give weights or exponent")
        weights = power_law_weights(n, exponent, mean_degree)
    w = np.asarray(weights, dtype=np.float64)
    if len(w) != n:
        raise ValueError("weights must have length n")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    total = w.sum()
    if total == 0:
        return np.zeros((0, 2), dtype=np.int64)
    rng = np.random.default_rng(seed)
    order = np.argsort(-w, kind="stable")
    ws = w[order].tolist()
    out = []
    for u in range(n - 1):
        wu = ws[u]
        if wu == 0:
            break
        v = u + 1
        p = min(wu * ws[v] / total, 1.0)
        while v < n and p > 0:
            if p != 1.0:
                r = rng.random()
                v += int(math.floor(math.log(r) / math.log1p(-p))) if r > 0 else n
            if v < n:
                q = min(wu * ws[v] / total, 1.0)
                if rng.random() < q / p:
                    out.append((order[u], order[v]))
                p = q
                v += 1
    return _finish(out)


def gen_small_world(n, k, beta, seed):
    """Watts-Strogatz: ring lattice of even degree ``k``, each edge rewired with prob ``beta``.

    A rewired edge keeps its source and gets a uniform new endpoint that is neither
    the source nor an existing neighbor, so the edge count stays ``n*k/2``.
    """
    if k % 2 or not 0 < k < n:
        raise ValueError("k must be even with 0 < k < n")
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    nbrs = [set() for _ in range(n)]
    for u in range(n):
        for d in range(1, k // 2 + 1):
            v = (u + d) % n
            nbrs[u].add(v)
            nbrs[v].add(u)
    for d in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + d) % n
            if v not in nbrs[u] or rng.random() >= beta:
                continue
            if len(nbrs[u]) >= n - 1:
                continue
            while True:
                x = int(rng.integers(n))
                if x != u and x not in nbrs[u]:
                    break
            nbrs[u].discard(v)
            nbrs[v].discard(u)
            nbrs[u].add(x)
            nbrs[x].add(u)
    return _finish([(u, v) for u in range(n) for v in nbrs[u] if u < v])


def uniform_types(n, L, seed):
    """Types ``1..L`` with every type used floor(n/L) or ceil(n/L) times, shuffled."""
    if not 1 <= L <= max(n, 1):
        raise ValueError("need 1 <= L <= n")
    rng = np.random.default_rng(seed)
    return rng.permutation(np.arange(n, dtype=np.int64) % L + 1)


def assign_types_uniform(g, L, seed):
    return g.with_types(uniform_types(g.num_nodes, L, seed), L)


def permute_types(node_type, seed):
    """Random permutation of an existing type assignment (keeps the histogram)."""
    rng = np.random.default_rng(seed)
    return rng.permutation(np.asarray(node_type, dtype=np.int64))


def typed_graph(edges, n, L, seed):
    """HeteroGraph on nodes ``0..n-1`` with uniform random types."""
    return HeteroGraph.from_edges(edges, uniform_types(n, L, seed), L)
