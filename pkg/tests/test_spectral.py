import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from lsec.errors import DegenerateGraph, DimMismatch
from lsec.metrics import acc
from lsec.spectral import (bottom_eigen, degrees, lift_embedding, reduced_laplacian,
                           spectral_embedding, spectral_partition)
from oracles import component_count, dense_generalized_bottom, dense_lift


def random_bipartite(rng, n, p, density=0.4):
    B = rng.uniform(0.05, 1.0, (n, p)) * (rng.random((n, p)) < density)
    B[np.arange(n), rng.integers(0, p, n)] = rng.uniform(0.05, 1.0, n)
    return B


def test_degree_examples():
    d = degrees(np.ones((2, 2)))
    np.testing.assert_array_equal(d.d_x, [2, 2])
    np.testing.assert_array_equal(d.d_r, [2, 2])
    d = degrees(sp.csr_matrix([[0.0, 0.5]]))
    np.testing.assert_array_equal(d.d_x, [0.5])
    np.testing.assert_array_equal(d.d_r, [0.0, 0.5])


def test_degrees_dense_oracle():
    B = random_bipartite(np.random.default_rng(0), 30, 8)
    d = degrees(sp.csr_matrix(B))
    np.testing.assert_allclose(d.d_x, B.sum(1), rtol=1e-14)
    np.testing.assert_allclose(d.d_r, B.sum(0), rtol=1e-14)


def test_star_graph():
    B = np.zeros((4, 3))
    B[:, 0] = 1.0
    red = reduced_laplacian(B)
    np.testing.assert_array_equal(red.columns, [0])
    np.testing.assert_allclose(red.laplacian, [[0.0]], atol=1e-15)


def test_two_stars_block_diagonal():
    B = np.zeros((6, 2))
    B[:3, 0] = 1.0
    B[3:, 1] = 2.0
    red = reduced_laplacian(B)
    np.testing.assert_allclose(red.laplacian, np.zeros((2, 2)), atol=1e-14)
    _, w = bottom_eigen(red.laplacian, red.d_r, 2)
    np.testing.assert_allclose(w, [0.0, 0.0], atol=1e-12)


def test_laplacian_dense_oracle():
    B = random_bipartite(np.random.default_rng(1), 40, 9)
    red = reduced_laplacian(sp.csr_matrix(B))
    _, _, L, dr = dense_generalized_bottom(B)
    np.testing.assert_allclose(red.laplacian, L, atol=1e-10)
    np.testing.assert_allclose(red.laplacian, red.laplacian.T, atol=1e-12)
    assert np.linalg.eigvalsh(red.laplacian).min() >= -1e-10


def test_degenerate_point():
    B = np.array([[1.0, 0.0], [0.0, 0.0]])
    with pytest.raises(DegenerateGraph):
        reduced_laplacian(B)


def test_constant_eigenvector_connected():
    B = np.random.default_rng(2).uniform(0.1, 1.0, (25, 6))
    red = reduced_laplacian(B)
    np.testing.assert_allclose(red.laplacian @ np.ones(6), 0.0, atol=1e-12)
    V, w = bottom_eigen(red.laplacian, red.d_r, 3)
    assert abs(w[0]) <= 1e-8
    assert np.ptp(V[:, 0]) <= 1e-8 * np.abs(V[:, 0]).max()


@given(seed=st.integers(0, 100_000), n=st.integers(4, 30), p=st.integers(2, 12),
       c=st.integers(1, 12))
def test_eigenpairs_match_jacobi(seed, n, p, c):
    rng = np.random.default_rng(seed)
    B = random_bipartite(rng, n, p)
    red = reduced_laplacian(sp.csr_matrix(B))
    c = min(c, red.columns.size)
    V, w = bottom_eigen(red.laplacian, red.d_r, c)
    w_ref, _, L, dr = dense_generalized_bottom(B)
    np.testing.assert_allclose(w, w_ref[:c], atol=1e-8)
    resid = np.linalg.norm(L @ V - (dr[:, None] * V) * w, axis=0)
    assert resid.max() <= 1e-8 * np.linalg.norm(L)
    np.testing.assert_allclose(V.T @ (dr[:, None] * V), np.eye(c), atol=1e-8)
    assert (w >= -1e-10).all() and (w <= 2 + 1e-10).all()


@given(seed=st.integers(0, 100_000))
def test_zero_eigenvalues_count_components(seed):
    rng = np.random.default_rng(seed)
    B = random_bipartite(rng, 12, 8, density=0.12)
    red = reduced_laplacian(B)
    _, w = bottom_eigen(red.laplacian, red.d_r, red.columns.size)
    assert int((w < 1e-9).sum()) == component_count(B)


def test_lift_examples():
    B = np.random.default_rng(3).uniform(0.1, 1.0, (10, 4))
    deg = degrees(B)
    V = np.column_stack([np.ones(4), np.arange(4.0)])
    emb = lift_embedding(B, deg, V, [0, 1], normalize=False)
    np.testing.assert_allclose(emb.vectors[:, 0], 1.0, rtol=1e-14)
    single = np.zeros((1, 4))
    single[0, 2] = 0.3
    emb = lift_embedding(single, degrees(single), V, [0, 1], normalize=False)
    np.testing.assert_allclose(emb.vectors[0], V[2], rtol=1e-14)
    with pytest.raises(DimMismatch):
        lift_embedding(B, deg, np.ones((3, 2)), [0, 1])


@pytest.mark.parametrize("normalize", [False, True])
def test_lift_dense_oracle(normalize):
    rng = np.random.default_rng(4)
    B = random_bipartite(rng, 30, 7)
    V = rng.normal(size=(7, 3))
    emb = lift_embedding(sp.csr_matrix(B), degrees(B), V, np.zeros(3), normalize=normalize)
    np.testing.assert_allclose(emb.vectors, dense_lift(B, V, normalize), atol=1e-10)


def test_partition_disconnected_groups():
    rng = np.random.default_rng(5)
    B = np.zeros((60, 6))
    B[:30, :3] = rng.uniform(0.2, 1.0, (30, 3))
    B[30:, 3:] = rng.uniform(0.2, 1.0, (30, 3))
    y = np.repeat([0, 1], 30)
    labels = spectral_partition(sp.csr_matrix(B), 2, seed=0, use_light=False)
    assert acc(labels, y) == 1.0
    again = spectral_partition(sp.csr_matrix(B), 2, seed=0, use_light=False)
    np.testing.assert_array_equal(labels, again)


def test_embedding_clamps_to_surviving():
    B = np.zeros((5, 4))
    B[:, 1] = 1.0
    B[:2, 2] = 1.0
    emb = spectral_embedding(B, 4)
    assert emb.c == 2


def test_eigen_falls_back_when_mrrr_fails(monkeypatch):
    import scipy.linalg

    real = scipy.linalg.eigh

    def flaky(a, *args, driver=None, **kw):
        if driver == "evr":
            raise np.linalg.LinAlgError("Internal Error.")
        return real(a, *args, driver=driver, **kw)

    B = np.kron(np.eye(3), np.ones((4, 2)))
    red = reduced_laplacian(B)
    monkeypatch.setattr(scipy.linalg, "eigh", flaky)
    V, w = bottom_eigen(red.laplacian, red.d_r, 3)
    np.testing.assert_allclose(w, 0.0, atol=1e-12)
    assert V.shape == (6, 3)
