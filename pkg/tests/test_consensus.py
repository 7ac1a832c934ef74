import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lsec.consensus import (build_indicator, canonical_order, consensus_cluster,
                            consensus_embedding, lsec)
from lsec.ensemble import EnsembleParams, compact_labels
from lsec.errors import MalformedEnsemble
from lsec.metrics import acc, nmi
from lsec.synthetic import gen_synthetic
from oracles import dense_generalized_bottom, dense_lift


def test_indicator_single():
    g = build_indicator([np.array([0, 1, 0])])
    np.testing.assert_array_equal(g.matrix.toarray(), [[1, 0], [0, 1], [1, 0]])
    np.testing.assert_array_equal(g.cluster_owner, [0, 0])


def test_indicator_identical_pair():
    lab = np.array([0, 1, 2, 1, 0])
    g = build_indicator([lab, lab])
    M = g.matrix.toarray()
    assert g.C == 6
    assert (M.sum(axis=1) == 2).all()
    np.testing.assert_array_equal(M[:, :3], M[:, 3:])


ensembles = st.tuples(st.integers(1, 60), st.integers(1, 6), st.integers(0, 10_000)).map(
    lambda t: [compact_labels(np.random.default_rng(t[2] + b).integers(0, 1 + (t[2] + b) % 7, t[0]))
               for b in range(t[1])])


@given(ensembles)
def test_indicator_invariants(runs):
    g = build_indicator(runs)
    n, m = runs[0].size, len(runs)
    M = g.matrix.toarray()
    assert (M.sum(axis=1) == m).all()
    assert g.matrix.nnz == n * m
    offset = 0
    for b, lab in enumerate(runs):
        c = lab.max() + 1
        block = M[:, offset:offset + c]
        assert (block.sum(axis=1) == 1).all()
        np.testing.assert_array_equal(block.sum(axis=0), np.bincount(lab))
        assert (g.cluster_owner[offset:offset + c] == b).all()
        offset += c
    assert (M.sum(axis=0) > 0).all()


def test_indicator_malformed():
    with pytest.raises(MalformedEnsemble):
        build_indicator([])
    with pytest.raises(MalformedEnsemble):
        build_indicator([np.array([0, 1]), np.array([0, 1, 1])])
    with pytest.raises(MalformedEnsemble):
        build_indicator([np.array([0, 2, 2])])


def test_point_degrees_equal_m():
    runs = [np.random.default_rng(b).integers(0, 4, 50) for b in range(5)]
    runs = [compact_labels(r) for r in runs]
    g = build_indicator(runs)
    np.testing.assert_array_equal(np.asarray(g.matrix.sum(axis=1)).ravel(), 5)


@given(seed=st.integers(0, 100_000), c=st.integers(2, 6), m=st.integers(1, 5))
def test_identical_ensemble_recovered(seed, c, m):
    rng = np.random.default_rng(seed)
    lab = np.concatenate([np.arange(c), rng.integers(0, c, 40)])
    rng.shuffle(lab)
    g = build_indicator([lab] * m)
    emb = consensus_embedding(g, c)
    assert (np.abs(emb.eigenvalues) <= 1e-8).sum() >= c
    out = consensus_cluster(emb, c, seed=seed)
    assert acc(out, lab) == 1.0


def test_embedding_dense_oracle():
    rng = np.random.default_rng(7)
    runs = [compact_labels(rng.integers(0, 3, 20)) for _ in range(3)]
    g = build_indicator(runs)
    emb = consensus_embedding(g, 3)
    B = g.matrix.toarray()
    w_ref, V_ref, _, _ = dense_generalized_bottom(B)
    np.testing.assert_allclose(emb.eigenvalues, w_ref[:3], atol=1e-10)
    # eigenvectors are unique up to sign when the eigenvalues are simple
    if np.min(np.diff(w_ref[:4])) > 1e-6:
        U_ref = dense_lift(B, V_ref[:, :3], normalize=True)
        signs = np.sign(np.sum(U_ref * emb.vectors, axis=0))
        np.testing.assert_allclose(emb.vectors, U_ref * signs, atol=1e-10)


def test_c_tilde_equals_n():
    runs = [np.arange(6), np.array([0, 0, 1, 1, 2, 2])]
    g = build_indicator(runs)
    emb = consensus_embedding(g, 6)
    out = consensus_cluster(emb, 6, seed=0)
    assert sorted(out) == list(range(6))


def test_canonical_order_invariance():
    rng = np.random.default_rng(8)
    truth = np.repeat([0, 1, 2], 30)
    runs = []
    for b in range(6):
        noisy = truth * 3 + rng.integers(0, 3, truth.size)
        flip = rng.random(truth.size) < 0.05
        noisy[flip] = rng.integers(0, 9, flip.sum())
        runs.append(compact_labels(rng.permutation(9)[noisy]))
    ref = None
    for shuffle_seed in range(4):
        order = np.random.default_rng(shuffle_seed).permutation(6)
        canon = canonical_order([runs[i] for i in order])
        out = consensus_cluster(consensus_embedding(build_indicator(canon), 3), 3, seed=1)
        if ref is None:
            ref = out
        assert acc(out, ref) == 1.0


@pytest.fixture(scope="module")
def cc_runs():
    X, y = gen_synthetic("cc", 5000, 0.05, 1)
    params = EnsembleParams(m=8, q=2, p=150)
    return y, [lsec(X, params, 3, seed=s) for s in range(10)]


def test_consensus_not_worse_than_best_base(cc_runs):
    y, results = cc_runs
    for r in results:
        best = max(nmi(b.labels, y) for b in r.ensemble.base)
        assert nmi(r.labels, y) >= best - 0.05


def test_lsec_deterministic_and_timed(cc_runs):
    y, results = cc_runs
    X, _ = gen_synthetic("cc", 5000, 0.05, 1)
    again = lsec(X, EnsembleParams(m=8, q=2, p=150), 3, seed=0)
    np.testing.assert_array_equal(again.labels, results[0].labels)
    assert {"generation_s", "consensus_embedding_s", "consensus_kmeans_s", "total_s"} <= set(
        again.timings)
    assert np.bincount(again.labels).size == 3
