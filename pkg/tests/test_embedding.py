import numpy as np
import pytest
import scipy.sparse as sp

from hetgraphlets import keys as K
from hetgraphlets.counting import count_all, orbits_to_graphlets
from hetgraphlets.embedding import (DENSE_LIMIT, EmbeddingError, MotifWeightedGraph, embed,
                                    motif_weighted_graph, normalized_laplacian, write_embedding)
from hetgraphlets.generators import gen_er, gen_small_world, typed_graph

TRI = K.GraphletKey(2, (1, 1, 2))


def check(mwg, emb):
    """The spectral guarantees every embedding must satisfy."""
    Lap = normalized_laplacian(mwg.W)
    for c, vals in emb.eigenvalues.items():
        assert np.all(emb.residuals[c] <= 1e-8)
        assert vals[0] <= 1e-10
        assert np.all(vals >= -1e-9) and np.all(vals <= 2 + 1e-9)
        assert np.all(np.diff(vals) >= -1e-12)
    live = mwg.degree > 0
    norms = np.linalg.norm(emb.Z, axis=1)
    assert np.allclose(norms[live], 1.0, atol=1e-12)
    assert np.all(norms[~live] == 0)
    assert np.allclose(Lap.toarray(), Lap.toarray().T)


def test_g1_triangle_weights(g1):
    mwg = motif_weighted_graph(g1, count_all(g1), TRI)
    W = mwg.W.toarray()
    assert W[0, 1] == W[0, 2] == W[1, 2] == 1
    assert W[2, 3] == 0 and mwg.degree[3] == 0
    assert np.array_equal(W, W.T) and np.all(np.diag(W) == 0)


def test_g1_embedding_symmetry(g1):
    mwg = motif_weighted_graph(g1, count_all(g1), K.encode(TRI, 2))
    emb = embed(mwg, 2)
    check(mwg, emb)
    assert np.allclose(emb.Z[0], emb.Z[1], atol=1e-12)
    assert np.all(emb.Z[3] == 0)


def test_unknown_key_lists_available(g1):
    with pytest.raises(KeyError, match="available keys include"):
        motif_weighted_graph(g1, count_all(g1), K.GraphletKey(12, (1, 1, 1, 1)))


def test_embed_refuses_empty():
    W = sp.csr_matrix((3, 3))
    mwg = MotifWeightedGraph(W, np.zeros(3), np.arange(3), 3, np.arange(3))
    with pytest.raises(EmbeddingError):
        embed(mwg, 2)


def test_orbit_key_is_accepted(g1):
    # a tailed-triangle orbit key selects the whole tailed-triangle graphlet
    mwg = motif_weighted_graph(g1, count_all(g1), K.GraphletKey(9, (1, 1, 2, 2)))
    assert mwg.W.nnz == 8


def test_first_vector_is_degree_scaled_constant():
    g = typed_graph(gen_er(60, 0.2, 2), 60, 1, 2)
    mwg = motif_weighted_graph(g, count_all(g), K.GraphletKey(2, (1, 1, 1)))
    emb = embed(mwg, 1)
    check(mwg, emb)
    for c in emb.eigenvalues:
        nodes = np.flatnonzero(mwg.components == c)
        assert np.all(emb.Z[nodes, 0] == pytest.approx(1.0))


@pytest.mark.parametrize("seed", range(4))
def test_spectral_guarantees_random(seed):
    g = typed_graph(gen_er(150, 0.06, seed), 150, 2, seed)
    t = orbits_to_graphlets(count_all(g))
    for h in t.distinct_keys()[:6]:
        mwg = motif_weighted_graph(g, t, int(h))
        if mwg.degree.any():
            check(mwg, embed(mwg, 4, workers=2))


def test_small_components_truncate_dimension():
    g = typed_graph(np.array([[0, 1], [1, 2], [0, 2], [3, 4], [4, 5], [3, 5], [5, 6], [3, 6]]),
                    7, 1, 0)
    mwg = motif_weighted_graph(g, count_all(g), K.GraphletKey(2, (1, 1, 1)))
    emb = embed(mwg, 5)
    check(mwg, emb)
    assert {len(v) for v in emb.eigenvalues.values()} == {3, 4}


def test_sparse_solver_path():
    n = DENSE_LIMIT + 500
    g = typed_graph(gen_small_world(n, 6, 0.1, 0), n, 1, 0)
    mwg = motif_weighted_graph(g, count_all(g), K.GraphletKey(2, (1, 1, 1)))
    assert max(np.bincount(mwg.components)) > DENSE_LIMIT
    emb = embed(mwg, 3)
    check(mwg, emb)


def test_deterministic_and_written(g1, tmp_path):
    mwg = motif_weighted_graph(g1, count_all(g1), TRI)
    a, b = embed(mwg, 2), embed(mwg, 2)
    assert np.array_equal(a.Z, b.Z)
    write_embedding(a, tmp_path / "z")
    rows = (tmp_path / "z").read_text().splitlines()
    assert rows[3] == "4 0 0"
    assert np.allclose([float(x) for x in rows[0].split()[1:]], a.Z[0], atol=0)
