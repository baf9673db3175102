"""Sparse per-edge count tables and the ``tgc v1`` text format.

A count file looks like::

    # tgc v1
    # mode=typed L=2 N=4 M=4
    1 2 1:1 2:1 3:1
    ...

Each edge line holds the two original node ids and ``id:count`` pairs, where ids
are dense integers (from 1, first-seen order) resolved by the sidecar file
``<path>.ids`` with lines ``id hash orbit t1 t2 t3 t4``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import keys as K

MAGIC = "# tgc v1"


class CountFormatError(ValueError):
    pass


def merge_segments(offsets, keys, counts):
    """Sort entries by key within each segment and sum duplicate keys; drop zeros."""
    offsets = np.asarray(offsets, dtype=np.int64)
    keys = np.asarray(keys, dtype=np.int64)
    counts = np.asarray(counts, dtype=np.int64)
    m = len(offsets) - 1
    if len(keys) == 0:
        return np.zeros(m + 1, np.int64), keys, counts
    seg = np.repeat(np.arange(m, dtype=np.int64), np.diff(offsets))
    order = np.lexsort((keys, seg))
    seg, keys, counts = seg[order], keys[order], counts[order]
    start = np.ones(len(keys), dtype=bool)
    start[1:] = (seg[1:] != seg[:-1]) | (keys[1:] != keys[:-1])
    idx = np.flatnonzero(start)
    counts = np.add.reduceat(counts, idx)
    keys, seg = keys[idx], seg[idx]
    nz = counts != 0
    keys, seg, counts = keys[nz], seg[nz], counts[nz]
    new_offsets = np.zeros(m + 1, dtype=np.int64)
    np.add.at(new_offsets, seg + 1, 1)
    return np.cumsum(new_offsets), keys, counts


@dataclass(eq=False)
class LocalCountTable:
    """Nonzero ``(hash, count)`` pairs per edge, in CSR layout over edges.

    ``endpoints[e]`` holds the original node ids of edge ``e``; entries of edge ``e``
    are ``keys[offsets[e]:offsets[e+1]]`` (sorted) with matching ``counts``.
    """

    mode: str
    L: int
    N: int
    endpoints: np.ndarray
    offsets: np.ndarray
    keys: np.ndarray
    counts: np.ndarray
    level: str = "orbit"
    meta: dict = field(default_factory=dict)

    @property
    def M(self):
        return len(self.offsets) - 1

    def __len__(self):
        return self.M

    def entries(self, e):
        a, b = self.offsets[e], self.offsets[e + 1]
        return list(zip(self.keys[a:b].tolist(), self.counts[a:b].tolist()))

    def edge_dict(self, e, decoded=True):
        if not decoded:
            return dict(self.entries(e))
        return {K.decode(h, self.L, self.mode): c for h, c in self.entries(e)}

    def find_edge(self, u, v):
        """Index of the edge with original endpoints ``{u, v}``."""
        a, b = min(u, v), max(u, v)
        lo = np.minimum(self.endpoints[:, 0], self.endpoints[:, 1])
        hi = np.maximum(self.endpoints[:, 0], self.endpoints[:, 1])
        hit = np.flatnonzero((lo == a) & (hi == b))
        if len(hit) == 0:
            raise KeyError(f"({u}, {v}) is not an edge")
        return int(hit[0])

    def distinct_keys(self):
        return np.unique(self.keys)

    def mean_nonzeros(self):
        return len(self.keys) / self.M if self.M else 0.0

    def with_keys(self, keys):
        return LocalCountTable(self.mode, self.L, self.N, self.endpoints, self.offsets,
                               np.asarray(keys, np.int64), self.counts, self.level)

    def __eq__(self, other):
        if not isinstance(other, LocalCountTable):
            return NotImplemented
        return (self.mode == other.mode and self.L == other.L and self.N == other.N
                and np.array_equal(self.endpoints, other.endpoints)
                and np.array_equal(self.offsets, other.offsets)
                and np.array_equal(self.keys, other.keys)
                and np.array_equal(self.counts, other.counts))

    def first_difference(self, other):
        """``(edge, hash, self_count, other_count)`` of the first disagreement, or None."""
        if self.M != other.M:
            return (None, None, self.M, other.M)
        for e in range(self.M):
            a, b = self.edge_dict(e, decoded=False), other.edge_dict(e, decoded=False)
            if a != b:
                for h in sorted(set(a) | set(b)):
                    if a.get(h, 0) != b.get(h, 0):
                        return (e, h, a.get(h, 0), b.get(h, 0))
        return None


def _sidecar(path):
    return Path(str(path) + ".ids")


def write_counts(table, path):
    """Write ``table`` as ``tgc v1`` text plus the ``.ids`` lookup sidecar."""
    path = Path(path)
    uniq, first = np.unique(table.keys, return_index=True)
    rank = np.argsort(first, kind="stable")
    seen_order = uniq[rank]
    ids = np.arange(1, len(uniq) + 1, dtype=np.int64)
    id_of_sorted = np.empty_like(ids)
    id_of_sorted[rank] = ids
    dense = id_of_sorted[np.searchsorted(uniq, table.keys)]
    mode = "pa" if table.mode == K.POSITION_AWARE else "typed"
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(f"{MAGIC}\n# mode={mode} L={table.L} N={table.N} M={table.M}\n")
            off = table.offsets
            dense_l = dense.tolist()
            counts_l = table.counts.tolist()
            for e in range(table.M):
                u, v = table.endpoints[e]
                pairs = " ".join(f"{dense_l[k]}:{counts_l[k]}" for k in range(off[e], off[e + 1]))
                fh.write(f"{u} {v} {pairs}\n" if pairs else f"{u} {v}\n")
        with open(_sidecar(path), "w", newline="\n") as fh:
            for i, h in zip(ids.tolist(), seen_order.tolist()):
                key = K.decode(h, table.L, table.mode)
                t = K._pad(key.types)
                fh.write(f"{i} {h} {key.orbit} {t[0]} {t[1]} {t[2]} {t[3]}\n")
    except OSError as exc:
        raise OSError(f"cannot write counts to {path}: {exc}") from exc


def read_counts(path):
    """Inverse of :func:`write_counts`."""
    path = Path(path)
    id_to_hash = {}
    with open(_sidecar(path)) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 7:
                raise CountFormatError(f"{_sidecar(path)}:{lineno}: malformed lookup line")
            id_to_hash[int(parts[0])] = int(parts[1])

    with open(path) as fh:
        lines = fh.read().split("\n")
    if not lines or lines[0] != MAGIC:
        raise CountFormatError(f"{path}:1: expected {MAGIC!r}")
    try:
        meta = dict(kv.split("=", 1) for kv in lines[1].lstrip("# ").split())
        mode = K.POSITION_AWARE if meta["mode"] == "pa" else K.TYPED
        L, N, M = int(meta["L"]), int(meta["N"]), int(meta["M"])
    except (IndexError, KeyError, ValueError):
        raise CountFormatError(f"{path}:2: malformed header") from None

    endpoints, offsets, hashes, counts = [], [0], [], []
    for lineno, line in enumerate(lines[2:], start=3):
        if not line:
            continue
        parts = line.split(" ")
        try:
            endpoints.append((int(parts[0]), int(parts[1])))
            for tok in parts[2:]:
                i, c = tok.split(":")
                hashes.append(id_to_hash[int(i)])
                counts.append(int(c))
        except KeyError as exc:
            raise CountFormatError(f"{path}:{lineno}: dangling id {exc.args[0]}") from None
        except (ValueError, IndexError):
            raise CountFormatError(f"{path}:{lineno}: malformed edge line") from None
        offsets.append(len(hashes))
    if len(endpoints) != M:
        raise CountFormatError(f"{path}: header says M={M}, found {len(endpoints)} edges")
    return LocalCountTable(
        mode=mode, L=L, N=N,
        endpoints=np.asarray(endpoints, dtype=np.int64).reshape(-1, 2),
        offsets=np.asarray(offsets, dtype=np.int64),
        keys=np.asarray(hashes, dtype=np.int64),
        counts=np.asarray(counts, dtype=np.int64),
    )
