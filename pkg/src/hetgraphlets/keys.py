"""Typed and position-aware graphlet keys: orbit table, canonical forms, integer hashes.

Orbit codes for the edge anchoring a count::

    0 edge                      7 tailed-triangle tail edge
    1 3-path                    8 tailed-triangle edge opposite the tail
    2 triangle                  9 tailed-triangle edge at the tail's apex
    3 4-path end edge          10 chordal-cycle rim edge
    4 4-path center edge       11 chordal-cycle chord
    5 4-star                   12 4-clique
    6 4-cycle

Position-aware role order for each orbit, as a tuple of node types:

    0  (u, v)                                     sorted
    1  (center, end, end)                         ends sorted
    2  (a, b, c)                                  sorted
    3  (anchor end, anchor mid, far mid, far end)
    4  (i, j, x~j, y~i) on the path y-i-j-x       min with (j, i, y, x)
    5  (center, anchored leaf, leaf, leaf)        last two sorted
    6  (i, j, k~j, r~i) on the cycle i-j-k-r      min with (j, i, r, k)
    7  (apex, pendant, tri, tri)                  last two sorted
    8  (tri, tri, tri with pendant, pendant)      first two sorted
    9  (apex, other anchor, third tri, pendant)
    10 (rim deg-2 end, rim deg-3 end, other deg-3, other deg-2)
    11 (chord, chord, side, side)                 both pairs sorted
    12 (i, j, k, r)                               both pairs sorted

A graphlet-level key reuses the orbit code of its shape's representative orbit
(0, 1, 2, 3, 5, 6, 7, 10, 12) and that orbit's role order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TYPED = "typed"
POSITION_AWARE = "pa"
MODES = (TYPED, POSITION_AWARE)

ORBIT_NAMES = (
    "edge", "3-path", "triangle", "4-path-edge", "4-path-center", "4-star", "4-cycle",
    "tailed-triangle-tail-edge", "tailed-triangle-center", "tailed-triangle-tri-edge",
    "chordal-cycle-edge", "chordal-cycle-center", "4-clique",
)
NUM_ORBITS = len(ORBIT_NAMES)
ORBIT_SIZE = (2, 3, 3, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4)

SHAPE_NAMES = ("edge", "3-path", "triangle", "4-path", "4-star", "4-cycle",
               "tailed-triangle", "chordal-cycle", "4-clique")
SHAPE_OF_ORBIT = (0, 1, 2, 3, 3, 4, 5, 6, 6, 6, 7, 7, 8)
SHAPE_EDGES = (1, 2, 3, 3, 3, 4, 4, 5, 6)
SHAPE_SIZE = (2, 3, 3, 4, 4, 4, 4, 4, 4)
REPRESENTATIVE_ORBIT = (0, 1, 2, 3, 5, 6, 7, 10, 12)

# role index feeding each position of the representative orbit's role order
_TO_REPRESENTATIVE = {
    4: (3, 0, 1, 2),
    8: (2, 3, 0, 1),
    9: (0, 3, 1, 2),
    11: (2, 0, 1, 3),
}

# edges among role positions of each shape's representative orbit
SHAPE_PATTERNS = (
    ((0, 1),),
    ((0, 1), (0, 2)),
    ((0, 1), (0, 2), (1, 2)),
    ((0, 1), (1, 2), (2, 3)),
    ((0, 1), (0, 2), (0, 3)),
    ((0, 1), (1, 2), (2, 3), (0, 3)),
    ((0, 1), (0, 2), (0, 3), (2, 3)),
    ((0, 1), (0, 2), (1, 2), (1, 3), (2, 3)),
    ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)),
)


class KeyDomainError(ValueError):
    """A key or hash lies outside the encodable domain."""


@dataclass(frozen=True, order=True)
class GraphletKey:
    orbit: int
    types: tuple
    mode: str = TYPED

    @property
    def shape(self):
        return SHAPE_OF_ORBIT[self.orbit]

    def __str__(self):
        return f"{ORBIT_NAMES[self.orbit]}{self.types}"


def radix(L):
    """Digit base for hashing with ``L`` types: 10, 100, then the next power of 10 above ``L``."""
    if L < 10:
        return 10
    if L < 100:
        return 100
    return 10 ** (len(str(int(L))))


def _pad(types):
    return tuple(types) + (0,) * (4 - len(types))


def encode(key, L):
    """Integer hash ``orbit*R^4 + t1*R^3 + t2*R^2 + t3*R + t4`` (absent slots are 0)."""
    R = radix(L)
    if not 0 <= key.orbit < NUM_ORBITS:
        raise KeyDomainError(f"unknown orbit {key.orbit}")
    t = _pad(key.types)
    for x in t:
        if not 0 <= x < R:
            raise KeyDomainError(f"type {x} not encodable with radix {R}")
    return (((key.orbit * R + t[0]) * R + t[1]) * R + t[2]) * R + t[3]


def decode(h, L, mode=TYPED):
    R = radix(L)
    h = int(h)
    if h < 0:
        raise KeyDomainError(f"negative hash {h}")
    orbit, rest = divmod(h, R ** 4)
    if orbit >= NUM_ORBITS:
        raise KeyDomainError(f"hash {h} decodes to unknown orbit {orbit}")
    digits = []
    for p in (3, 2, 1, 0):
        d, rest = divmod(rest, R ** p)
        digits.append(d)
    k = ORBIT_SIZE[orbit]
    if any(digits[k:]):
        raise KeyDomainError(f"hash {h} has nonzero padding for orbit {orbit}")
    return GraphletKey(orbit, tuple(digits[:k]), mode)


@lru_cache(maxsize=1)
def _sorted_lookup():
    # index s = t1*1000 + t2*100 + t3*10 + t4 (digits 0..9) -> sorted digits, same base
    idx = np.arange(10 ** 4)
    digits = np.stack([idx // 1000, idx // 100 % 10, idx // 10 % 10, idx % 10], axis=1)
    digits.sort(axis=1)
    table = digits @ np.array([1000, 100, 10, 1])
    table.setflags(write=False)
    return table


def canonicalize_typed(orbit, raw):
    """Typed key: the type multiset in non-decreasing order."""
    raw = tuple(int(x) for x in raw)
    if len(raw) == 4 and all(0 <= x < 10 for x in raw):
        s = int(_sorted_lookup()[raw[0] * 1000 + raw[1] * 100 + raw[2] * 10 + raw[3]])
        return GraphletKey(orbit, (s // 1000, s // 100 % 10, s // 10 % 10, s % 10), TYPED)
    return GraphletKey(orbit, tuple(sorted(raw)), TYPED)


def _pa_types(orbit, t):
    if orbit in (0, 2):
        return tuple(sorted(t))
    if orbit == 1:
        return (t[0],) + tuple(sorted(t[1:]))
    if orbit in (4, 6):
        return min(t, (t[1], t[0], t[3], t[2]))
    if orbit in (5, 7):
        return t[:2] + tuple(sorted(t[2:]))
    if orbit == 8:
        return tuple(sorted(t[:2])) + t[2:]
    if orbit in (11, 12):
        return tuple(sorted(t[:2])) + tuple(sorted(t[2:]))
    return t


def canonicalize_position_aware(orbit, roles):
    """Position-aware key from types listed in the orbit's role order (see module doc)."""
    roles = tuple(int(x) for x in roles)
    if len(roles) != ORBIT_SIZE[orbit]:
        raise ValueError(f"orbit {orbit} takes {ORBIT_SIZE[orbit]} roles, got {len(roles)}")
    return GraphletKey(orbit, _pa_types(orbit, roles), POSITION_AWARE)


def canonicalize(orbit, roles, mode):
    if mode == TYPED:
        return canonicalize_typed(orbit, roles)
    if mode == POSITION_AWARE:
        return canonicalize_position_aware(orbit, roles)
    raise ValueError(f"unknown mode {mode!r}")


@lru_cache(maxsize=None)
def shape_automorphisms(shape):
    """Permutations ``p`` of role positions with ``types[p[k]]`` giving an equivalent labeling."""
    k = SHAPE_SIZE[shape]
    edges = {frozenset(e) for e in SHAPE_PATTERNS[shape]}
    out = []
    for p in itertools.permutations(range(k)):
        if {frozenset((p[a], p[b])) for a, b in edges} == edges:
            out.append(p)
    return tuple(out)


def to_graphlet_key(key):
    """Map an orbit-level key to the key of the graphlet it belongs to."""
    shape = SHAPE_OF_ORBIT[key.orbit]
    rep = REPRESENTATIVE_ORBIT[shape]
    if key.mode == TYPED:
        return GraphletKey(rep, tuple(sorted(key.types)), TYPED)
    order = _TO_REPRESENTATIVE.get(key.orbit)
    t = key.types if order is None else tuple(key.types[k] for k in order)
    best = min(tuple(t[p[k]] for k in range(len(t))) for p in shape_automorphisms(shape))
    return GraphletKey(rep, best, POSITION_AWARE)


def _checked(n):
    if n > np.iinfo(np.int64).max:
        raise OverflowError(f"count {n} exceeds 64-bit range")
    return n


def count_possible_typed(K, L):
    """Number of distinct typed graphlets of one K-node shape with L types: C(L+K-1, K)."""
    if K < 1 or L < 1:
        raise ValueError("K and L must be >= 1")
    return _checked(math.comb(L + K - 1, K))


def count_possible_position_aware(K, L):
    """Ordered type selections for one K-node shape: L**K."""
    if K < 1 or L < 1:
        raise ValueError("K and L must be >= 1")
    return _checked(L ** K)


def enumerate_keys(orbit, L, mode):
    """All distinct canonical keys of ``orbit`` over every type assignment from ``1..L``."""
    k = ORBIT_SIZE[orbit]
    return sorted({canonicalize(orbit, t, mode)
                   for t in itertools.product(range(1, L + 1), repeat=k)})


def write_lookup_table(keys, L, path):
    """Write ``hash orbit t1 t2 t3 t4 mode`` lines, sorted by hash."""
    rows = sorted((encode(k, L), k) for k in set(keys))
    with open(path, "w") as fh:
        for h, k in rows:
            t = _pad(k.types)
            fh.write(f"{h} {k.orbit} {t[0]} {t[1]} {t[2]} {t[3]} {k.mode}\n")


def read_lookup_table(path):
    out = {}
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            h, orbit = int(parts[0]), int(parts[1])
            t = tuple(int(x) for x in parts[2:6])[:ORBIT_SIZE[orbit]]
            out[h] = GraphletKey(orbit, t, parts[6])
    return out
