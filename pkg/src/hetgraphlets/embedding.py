"""Spectral node embeddings of a motif-weighted graph.

Each edge is reweighted by how many instances of one chosen typed graphlet contain
it. Nodes are then embedded with the bottom eigenvectors of the normalized
Laplacian ``I - D^-1/2 W D^-1/2``, solved per connected component and row-normalized.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.csgraph as csgraph
import scipy.sparse.linalg as spla

from . import keys as K
from .counting import orbits_to_graphlets

log = logging.getLogger(__name__)

DENSE_LIMIT = 2000
RESIDUAL_TOL = 1e-8
DEGENERACY_TOL = 1e-9


class EmbeddingError(RuntimeError):
    pass


@dataclass
class MotifWeightedGraph:
    W: sp.csr_matrix
    degree: np.ndarray
    components: np.ndarray
    n_components: int
    labels: np.ndarray
    key: K.GraphletKey | None = None

    @property
    def num_nodes(self):
        return self.W.shape[0]

    def isolated(self):
        return self.degree == 0


@dataclass
class Embedding:
    Z: np.ndarray
    labels: np.ndarray
    eigenvalues: dict = field(default_factory=dict)  # component id -> sorted eigenvalues
    residuals: dict = field(default_factory=dict)  # component id -> per-vector residual norms


def _resolve_key(key, table):
    if isinstance(key, (int, np.integer)):
        key = K.decode(int(key), table.L, table.mode)
    if key.mode != table.mode:
        raise ValueError(f"key mode {key.mode!r} does not match table mode {table.mode!r}")
    return K.to_graphlet_key(key)


def motif_weighted_graph(g, table, key):
    """Weighted adjacency with ``W[i, j]`` = count of ``key`` on edge (i, j).

    ``table`` must have been counted on ``g``; orbit-level tables are aggregated
    first. ``key`` is a :class:`GraphletKey` or its hash.
    """
    if table.M != g.num_edges or not np.array_equal(table.endpoints, g.labels[g.edges]):
        raise ValueError("count table does not belong to this graph")
    if table.level != "graphlet":
        table = orbits_to_graphlets(table)
    key = _resolve_key(key, table)
    h = K.encode(key, table.L)
    hit = np.flatnonzero(table.keys == h)
    if len(hit) == 0:
        avail = [str(K.decode(x, table.L, table.mode)) for x in np.unique(table.keys)[:20]]
        raise KeyError(f"key {key} does not occur; available keys include: {', '.join(avail)}")
    edge_of = np.repeat(np.arange(table.M), np.diff(table.offsets))[hit]
    w = table.counts[hit].astype(np.float64)
    u, v = g.edges[edge_of, 0], g.edges[edge_of, 1]
    n = g.num_nodes
    W = sp.coo_matrix((np.concatenate([w, w]), (np.concatenate([u, v]), np.concatenate([v, u]))),
                      shape=(n, n)).tocsr()
    deg = np.asarray(W.sum(axis=1)).ravel()
    ncomp, comp = csgraph.connected_components(W, directed=False)
    return MotifWeightedGraph(W, deg, comp, ncomp, g.labels, key)


def normalized_laplacian(W):
    deg = np.asarray(W.sum(axis=1)).ravel()
    inv = np.zeros_like(deg)
    nz = deg > 0
    inv[nz] = 1.0 / np.sqrt(deg[nz])
    Dm = sp.diags(inv)
    return (sp.identity(W.shape[0], format="csr") - Dm @ W @ Dm).tocsr()


def _fix_signs(U):
    # largest-magnitude entry of each eigenvector made positive
    idx = np.argmax(np.abs(U), axis=0)
    s = np.sign(U[idx, np.arange(U.shape[1])])
    s[s == 0] = 1.0
    return U * s


def _canonical_basis(U, vals, tol=DEGENERACY_TOL):
    """Replace the solver's arbitrary basis inside each repeated eigenvalue.

    Within a cluster, basis vectors are picked greedily: the next vector is the
    projection of the node with the largest remaining weight onto the cluster
    (ties go to the highest node index), which makes the basis a function of the
    eigenspace alone.
    """
    U = U.copy()
    a = 0
    while a < len(vals):
        b = a + 1
        while b < len(vals) and vals[b] - vals[a] <= tol:
            b += 1
        if b - a > 1:
            R = U[:, a:b]
            for s in range(b - a):
                norms = np.linalg.norm(R, axis=1)
                k = int(np.flatnonzero(norms >= norms.max() - 1e-9)[-1])
                q = R[k] / norms[k]
                U[:, a + s] = R @ q
                # orthonormal complement of q in the remaining coefficient space
                _, _, vt = np.linalg.svd(q[None, :])
                R = R @ vt[1:].T
        a = b
    return U


def _eigs(Lc, k, nodes):
    n = Lc.shape[0]
    if n <= DENSE_LIMIT:
        return scipy.linalg.eigh(Lc.toarray(), subset_by_index=[0, k - 1])
    rng = np.random.default_rng(int(nodes[0]))
    v0 = rng.standard_normal(n)
    # L is singular, so shift just below zero
    vals, U = spla.eigsh(Lc, k=k, sigma=-1e-3, which="LM", v0=v0, tol=1e-10)
    order = np.argsort(vals)
    return vals[order], U[:, order]


def _solve(Lc, d, nodes):
    n = Lc.shape[0]
    k = min(n, d + 4) if n <= DENSE_LIMIT else min(n - 1, d + 4)
    while True:
        vals, U = _eigs(Lc, k, nodes)
        # a repeated eigenvalue cut by the dimension needs all its vectors
        if k >= n or (n > DENSE_LIMIT and k >= n - 1) or vals[-1] - vals[d - 1] > DEGENERACY_TOL:
            break
        k = min(n, 2 * k) if n <= DENSE_LIMIT else min(n - 1, 2 * k)
    U = _canonical_basis(U, vals)
    vals, U = vals[:d], U[:, :d]
    res = np.linalg.norm(Lc @ U - U * vals, axis=0)
    return vals, U, res


def embed(mwg, dim, workers=1):
    """``N x dim`` embedding; components smaller than ``dim`` get fewer coordinates."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if not np.any(mwg.degree > 0):
        raise EmbeddingError("motif-weighted graph has no edges; nothing to embed")
    Lap = normalized_laplacian(mwg.W)
    groups = [np.flatnonzero(mwg.components == c) for c in range(mwg.n_components)]
    groups = [(c, nodes) for c, nodes in enumerate(groups) if len(nodes) > 1]

    def work(item):
        c, nodes = item
        d = min(dim, len(nodes))
        if d < dim:
            log.info("component %d has %d nodes; using %d coordinates", c, len(nodes), d)
        Lc = Lap[nodes][:, nodes]
        vals, U, res = _solve(Lc, d, nodes)
        return c, nodes, vals, _fix_signs(U), res

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(work, groups))

    Z = np.zeros((mwg.num_nodes, dim))
    out = Embedding(Z, mwg.labels)
    for c, nodes, vals, U, res in results:
        if np.any(res > RESIDUAL_TOL):
            raise EmbeddingError(f"component {c}: eigen-residual {res.max():.3e} exceeds "
                                 f"{RESIDUAL_TOL:g}")
        norms = np.linalg.norm(U, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        Z[nodes, :U.shape[1]] = U / norms
        out.eigenvalues[c] = vals
        out.residuals[c] = res
    return out


def write_embedding(emb, path):
    """One line per node: ``node_id z1 ... zD``."""
    with open(path, "w", newline="\n") as fh:
        for label, row in zip(emb.labels.tolist(), emb.Z):
            fh.write(f"{label} " + " ".join(f"{x:.17g}" for x in row) + "\n")
