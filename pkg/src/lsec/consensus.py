"""Consensus clustering on the point-to-cluster indicator graph.

Every cluster of every base clustering becomes a column of an unweighted
``n x C`` incidence matrix; each point has exactly one edge per base
clustering. The same reduced bipartite eigenproblem used for the base
clusterings, now of size ``C x C``, gives a point embedding that plain
k-means splits into the final clusters.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from threadpoolctl import threadpool_limits

from ._seeding import seed_sequence
from .ensemble import CONSENSUS_STREAM, EnsembleParams, generate_ensemble
from .errors import MalformedEnsemble, ParamError
from .kmeans import kmeans
from .spectral import Embedding, bottom_eigen, degrees, lift_embedding, reduced_laplacian


@dataclass
class IndicatorGraph:
    """Incidence matrix plus, per column, the base clustering it came from."""

    matrix: sp.csr_matrix
    cluster_owner: np.ndarray
    m: int

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def C(self) -> int:
        return self.matrix.shape[1]


@dataclass
class ConsensusResult:
    labels: np.ndarray
    embedding: Embedding
    ensemble: object = None
    timings: dict = field(default_factory=dict)


def _label_arrays(ensemble):
    if hasattr(ensemble, "base"):
        return [np.asarray(b.labels) for b in ensemble.base]
    return [np.asarray(lab) for lab in ensemble]


def build_indicator(ensemble) -> IndicatorGraph:
    """Accepts an :class:`~lsec.ensemble.Ensemble` or a sequence of label vectors.

    Columns follow ensemble order, then cluster id.
    """
    runs = _label_arrays(ensemble)
    if not runs:
        raise MalformedEnsemble("ensemble is empty")
    n = runs[0].shape[0]
    m = len(runs)
    cols = np.empty((n, m), dtype=np.int64)
    owner = []
    offset = 0
    for b, lab in enumerate(runs):
        if lab.shape != (n,):
            raise MalformedEnsemble(f"base clustering {b} has shape {lab.shape}, expected ({n},)")
        if lab.size == 0 or lab.min() < 0:
            raise MalformedEnsemble(f"base clustering {b} has invalid labels")
        c = int(lab.max()) + 1
        if np.bincount(lab, minlength=c).min() == 0:
            raise MalformedEnsemble(f"base clustering {b} labels are not contiguous")
        cols[:, b] = lab + offset
        owner.extend([b] * c)
        offset += c
    matrix = sp.csr_matrix(
        (np.ones(n * m), cols.ravel(), np.arange(0, n * m + 1, m)), shape=(n, offset)
    )
    return IndicatorGraph(matrix, np.array(owner, dtype=np.int64), m)


def canonical_order(ensemble):
    """Label vectors sorted into a fixed order independent of their input order.

    Each vector is first relabeled by first appearance, then vectors are
    sorted lexicographically.
    """
    runs = []
    for lab in _label_arrays(ensemble):
        _, first, inverse = np.unique(lab, return_index=True, return_inverse=True)
        rank = np.empty(first.size, dtype=np.int64)
        rank[np.argsort(first)] = np.arange(first.size)
        runs.append(rank[inverse.ravel()])
    order = sorted(range(len(runs)), key=lambda i: runs[i].tobytes())
    return [runs[i] for i in order]


def consensus_embedding(graph: IndicatorGraph, c_tilde, normalize=True) -> Embedding:
    if not 1 <= c_tilde <= graph.C:
        raise ParamError(f"c_tilde must lie in [1, {graph.C}], got {c_tilde}")
    deg = degrees(graph.matrix)
    red = reduced_laplacian(graph.matrix, deg)
    V, w = bottom_eigen(red.laplacian, red.d_r, c_tilde)
    return lift_embedding(graph.matrix, deg, V, w, red.columns, normalize=normalize)


def consensus_cluster(embedding: Embedding, c_tilde, seed=0):
    """Plain k-means on the embedding rows."""
    if c_tilde < 2:
        raise ParamError("c_tilde must be >= 2")
    return kmeans(embedding.vectors, c_tilde, seed=seed).labels


def lsec(X, params: EnsembleParams, c_tilde, seed=None, workers=None) -> ConsensusResult:
    """Full pipeline: ensemble generation, indicator graph, embedding, k-means.

    ``seed`` overrides ``params.seed`` when given.
    """
    if seed is not None:
        params = EnsembleParams(**{**params.to_dict(), "seed": int(seed)})
    timings = {}
    # one BLAS thread keeps dense kernels bitwise reproducible across worker counts
    with threadpool_limits(limits=1):
        t0 = time.perf_counter()
        ens = generate_ensemble(X, params, workers=workers)
        t1 = time.perf_counter()
        graph = build_indicator(ens)
        emb = consensus_embedding(graph, c_tilde)
        t2 = time.perf_counter()
        labels = consensus_cluster(emb, c_tilde, seed=seed_sequence(params.seed, CONSENSUS_STREAM))
        t3 = time.perf_counter()
    timings["generation_s"] = t1 - t0
    timings["consensus_embedding_s"] = t2 - t1
    timings["consensus_kmeans_s"] = t3 - t2
    timings["total_s"] = t3 - t0
    return ConsensusResult(labels, emb, ens, timings)
