"""Whole-graph typed graphlet frequencies from per-edge counts.

Every instance of a shape with ``k`` edges is seen once from each of its edges,
so the graph-wide count of a graphlet key is its per-edge total divided by ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import keys as K
from .counting import ConsistencyError, orbits_to_graphlets


@dataclass
class GlobalCountTable:
    """Map from graphlet-level key hash to instance count."""

    mode: str
    L: int
    counts: dict = field(default_factory=dict)

    def items(self):
        """``(GraphletKey, count)`` pairs sorted by hash."""
        return [(K.decode(h, self.L, self.mode), c) for h, c in sorted(self.counts.items())]

    def get(self, key):
        return self.counts.get(K.encode(key, self.L), 0)

    def by_shape(self, shape):
        rep = K.REPRESENTATIVE_ORBIT[shape]
        return {k: c for k, c in self.items() if k.orbit == rep}

    def proportions(self, shape):
        """Fraction of the shape's instances that fall under each typed key."""
        sub = self.by_shape(shape)
        total = sum(sub.values())
        return {k: c / total for k, c in sub.items()} if total else {}


def edge_totals(table):
    """Raw per-key sums over all edges (no division), as ``{hash: total}``."""
    if len(table.keys) == 0:
        return {}
    uniq, inv = np.unique(table.keys, return_inverse=True)
    sums = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(sums, inv.reshape(-1), table.counts)
    return dict(zip(uniq.tolist(), sums.tolist()))


def global_counts(table):
    """Instance count per graphlet key. Orbit-level tables are aggregated first."""
    if table.level != "graphlet":
        table = orbits_to_graphlets(table)
    out = {}
    for h, total in edge_totals(table).items():
        key = K.decode(h, table.L, table.mode)
        k = K.SHAPE_EDGES[K.SHAPE_OF_ORBIT[key.orbit]]
        if total % k:
            raise ConsistencyError(f"key {key}: edge total {total} not divisible by {k}")
        out[h] = total // k
    return GlobalCountTable(table.mode, table.L, out)


def write_global(gt, path):
    """One line per key: ``hash orbit t1 t2 t3 t4 count``, sorted by hash."""
    with open(Path(path), "w", newline="\n") as fh:
        for h in sorted(gt.counts):
            key = K.decode(h, gt.L, gt.mode)
            t = K._pad(key.types)
            fh.write(f"{h} {key.orbit} {t[0]} {t[1]} {t[2]} {t[3]} {gt.counts[h]}\n")


def read_global(path, L, mode=K.TYPED):
    counts = {}
    with open(Path(path)) as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 7:
                raise ValueError(f"{path}:{lineno}: expected 7 fields")
            counts[int(parts[0])] = int(parts[6])
    return GlobalCountTable(mode, L, counts)
