from pathlib import Path

import numpy as np
import pytest

from hetgraphlets.generators import gen_chung_lu, gen_er, gen_small_world, typed_graph
from hetgraphlets.graph import HeteroGraph, load_graph

DATA = Path(__file__).parent / "data"


def make_graph(edges, types, labels=None):
    """Graph from 1-based node ids ``1..len(types)``."""
    e = np.asarray(edges, dtype=np.int64) - 1
    lab = np.arange(1, len(types) + 1) if labels is None else labels
    return HeteroGraph.from_edges(e, types, max(types), labels=lab)


@pytest.fixture
def g1():
    return load_graph(DATA / "g1.edges", DATA / "g1.types")


@pytest.fixture
def k4():
    return make_graph([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], [1, 1, 1, 1])


def small_graphs(count=12, seed=0):
    """A mixed bag of small seeded typed graphs (ER, CL, SW) for property checks."""
    out = []
    for s in range(seed, seed + count):
        L = (1, 2, 3, 5)[s % 4]
        kind = s % 3
        if kind == 0:
            edges, n = gen_er(18, 0.25, s), 18
        elif kind == 1:
            edges, n = gen_chung_lu(24, s, exponent=1.8, mean_degree=5), 24
        else:
            edges, n = gen_small_world(20, 4, 0.3, s), 20
        out.append(typed_graph(edges, n, L, s))
    return out
