import itertools

import pytest

from hetgraphlets import keys as K
from hetgraphlets.aggregate import global_counts
from hetgraphlets.oracle import (DisconnectedError, OracleRefused, classify_shape, edge_orbit,
                                 induced_instances, oracle_counts)
from hetgraphlets.generators import gen_er, typed_graph

from conftest import make_graph


def adj(*edges):
    return {frozenset(e) for e in edges}


def test_g1_table(g1):
    t = oracle_counts(g1)
    typed = lambda o, *x: K.GraphletKey(o, x)
    assert t.edge_dict(0) == {typed(0, 1, 1): 1, typed(2, 1, 1, 2): 1, typed(8, 1, 1, 2, 2): 1}
    assert t.edge_dict(1) == {typed(0, 1, 2): 1, typed(1, 1, 2, 2): 1, typed(2, 1, 1, 2): 1,
                              typed(9, 1, 1, 2, 2): 1}
    assert t.edge_dict(2) == t.edge_dict(1)
    assert t.edge_dict(3) == {typed(0, 2, 2): 1, typed(1, 1, 2, 2): 2, typed(7, 1, 1, 2, 2): 1}


def test_g1_orbit_keys_and_graphlet_keys(g1):
    assert len(oracle_counts(g1).distinct_keys()) == 8
    assert len(oracle_counts(g1, level="graphlet").distinct_keys()) == 6


def test_single_edge():
    g = make_graph([(1, 2)], [1, 1])
    t = oracle_counts(g)
    assert t.entries(0) == [(K.encode(K.GraphletKey(0, (1, 1)), 1), 1)]
    assert list(induced_instances(g)) == [(0, 1)]


def test_k4(k4):
    t = oracle_counts(k4)
    h = K.encode(K.GraphletKey(12, (1, 1, 1, 1)), 1)
    for e in range(6):
        assert t.edge_dict(e, decoded=False)[h] == 1
    assert global_counts(t).get(K.GraphletKey(12, (1, 1, 1, 1))) == 1


def test_refuses_large_graph():
    g = typed_graph(gen_er(120, 0.01, 0), 120, 2, 0)
    with pytest.raises(OracleRefused, match="100"):
        oracle_counts(g)
    assert oracle_counts(g, max_nodes=200).M == g.num_edges


@pytest.mark.parametrize("edges, shape", [
    ([(1, 2), (2, 3), (3, 4)], 3),
    ([(1, 2), (1, 3), (1, 4)], 4),
    ([(1, 2), (2, 3), (3, 4), (1, 4)], 5),
    ([(1, 2), (1, 3), (2, 3), (3, 4)], 6),
    ([(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)], 7),
    ([(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], 8),
    ([(1, 2), (2, 3)], 1),
    ([(1, 2), (2, 3), (1, 3)], 2),
])
def test_classify_shape(edges, shape):
    nodes = sorted({v for e in edges for v in e})
    assert classify_shape(nodes, adj(*edges))[0] == shape


def test_classify_roles():
    a = adj((1, 2), (2, 3), (3, 4))
    s, deg = classify_shape([1, 2, 3, 4], a)
    assert edge_orbit(s, deg, 1, 2) == 3 and edge_orbit(s, deg, 2, 3) == 4
    a = adj((1, 2), (1, 3), (2, 3), (2, 4), (3, 4))
    s, deg = classify_shape([1, 2, 3, 4], a)
    assert edge_orbit(s, deg, 2, 3) == 11 and edge_orbit(s, deg, 1, 2) == 10
    a = adj((1, 2), (1, 3), (2, 3), (3, 4))
    s, deg = classify_shape([1, 2, 3, 4], a)
    assert [edge_orbit(s, deg, *e) for e in ((3, 4), (1, 2), (1, 3))] == [7, 8, 9]


def test_classify_disconnected():
    with pytest.raises(DisconnectedError):
        classify_shape([1, 2, 3, 4], adj((1, 2), (3, 4)))


def test_instances_are_connected_and_complete():
    g = typed_graph(gen_er(9, 0.4, 5), 9, 1, 5)
    a = {frozenset(e) for e in g.edges.tolist()}
    found = set(induced_instances(g))
    for k in (2, 3, 4):
        for s in itertools.combinations(range(9), k):
            try:
                classify_shape(s, a)
                connected = True
            except DisconnectedError:
                connected = False
            assert (s in found) == connected
