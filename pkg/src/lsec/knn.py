"""Approximate K-nearest-landmark search and sparse Gaussian affinities.

A point's nearest landmark is taken to be the landmark it was assigned to
during selection. Its K nearest landmarks are then searched only among the
``K_prime`` landmarks closest to that landmark. Neighbor lists are kept
sorted by (squared distance, landmark index), so the list for any smaller K
is a prefix of the list for the largest K and can be reused without a new
search.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import _backend
from .errors import ParamError

MIN_WEIGHT = 1e-300


@dataclass
class NeighborLists:
    """Per-point landmark neighbors, ascending by squared distance.

    ``indices`` and ``sqdist`` have shape ``(n, K)``.
    """

    indices: np.ndarray
    sqdist: np.ndarray
    K_prime: int

    @property
    def K(self) -> int:
        return self.indices.shape[1]

    @property
    def n(self) -> int:
        return self.indices.shape[0]


@dataclass
class SparseAffinity:
    """Row-sparse ``n x p`` point-to-landmark Gaussian affinity.

    ``source`` records ``(landmark set index, K)`` when built in a batch.
    """

    matrix: sp.csr_matrix
    sigma: float
    source: tuple | None = None

    @property
    def shape(self):
        return self.matrix.shape


def default_k_prime(K, p):
    return min(max(2 * K, 10), p)


def candidate_table(landmarks, K_prime):
    """Indices of the ``K_prime`` landmarks nearest to each landmark (itself included)."""
    L = np.asarray(landmarks, dtype=np.float64)
    p = L.shape[0]
    owner = np.arange(p, dtype=np.int64)
    everyone = np.broadcast_to(owner, (p, p))
    idx, _ = _backend.knn_candidates(L, L, everyone, owner, K_prime)
    return idx


def approx_knn(X, landmarks, K, K_prime=None) -> NeighborLists:
    """K nearest landmarks of every point, searched among candidate landmarks.

    ``landmarks`` is a :class:`~lsec.landmarks.LandmarkSet`; its assignment
    selects each point's candidate row.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    p = landmarks.points.shape[0]
    if K_prime is None:
        K_prime = default_k_prime(K, p)
    if not 1 <= K <= K_prime <= p:
        raise ParamError(f"need 1 <= K <= K_prime <= p, got K={K}, K_prime={K_prime}, p={p}")
    if K == K_prime and K_prime < p:
        raise ParamError("K_prime must exceed K unless it covers every landmark")
    cand = candidate_table(landmarks.points, K_prime)
    idx, d2 = _backend.knn_candidates(X, landmarks.points, cand, landmarks.assignment, K)
    return NeighborLists(idx, d2, K_prime)


def nested_neighbors(full: NeighborLists, K) -> NeighborLists:
    """Prefix of length ``K`` of every sorted list; no distances are recomputed."""
    if not 1 <= K <= full.K:
        raise ParamError(f"K must lie in [1, {full.K}], got {K}")
    if K == full.K:
        return full
    return NeighborLists(full.indices[:, :K], full.sqdist[:, :K], full.K_prime)


def estimate_sigma(full: NeighborLists) -> float:
    """Mean distance to the farthest listed neighbor; 1 when every such distance is 0."""
    sigma = float(np.sqrt(full.sqdist[:, -1]).mean())
    return sigma if sigma > 0.0 else 1.0


def gaussian_weights(sqdist, sigma):
    """``exp(-sqdist / (2 sigma^2))`` clamped below at ``MIN_WEIGHT``."""
    if not sigma > 0:
        raise ParamError("sigma must be positive")
    weights = np.exp(sqdist / (-2.0 * sigma * sigma))
    np.maximum(weights, MIN_WEIGHT, out=weights)
    return weights


def _csr_rows(indices, weights, p):
    n, K = indices.shape
    itype = np.int32 if max(p, n * K) < np.iinfo(np.int32).max else np.int64
    return sp.csr_matrix(
        (np.ascontiguousarray(weights).ravel(),
         np.ascontiguousarray(indices, dtype=itype).ravel(),
         np.arange(0, n * K + 1, K, dtype=itype)),
        shape=(n, p),
    )


def build_affinity(neighbors: NeighborLists, sigma, p) -> SparseAffinity:
    """Gaussian weights ``exp(-dist^2 / (2 sigma^2))`` on the listed pairs."""
    weights = gaussian_weights(neighbors.sqdist, sigma)
    return SparseAffinity(_csr_rows(neighbors.indices, weights, p), float(sigma))


def build_affinity_batch(X, landmark_sets, K_list, K_prime=None, stats=None):
    """One search per landmark set at ``max(K_list)``, one affinity per (set, K).

    Output order is set-major: all K values for set 0, then set 1, and so on.
    ``stats`` (a dict) receives a ``knn_calls`` count.
    """
    K_list = [int(k) for k in K_list]
    if not K_list or any(a >= b for a, b in zip(K_list, K_list[1:])):
        raise ParamError(f"K_list must be strictly ascending, got {K_list}")
    out = []
    for i, ls in enumerate(landmark_sets):
        full = approx_knn(X, ls, K_list[-1], K_prime)
        if stats is not None:
            stats["knn_calls"] = stats.get("knn_calls", 0) + 1
        sigma = estimate_sigma(full)
        # the kernel is elementwise, so prefixes of the full weight table are exact
        weights = gaussian_weights(full.sqdist, sigma)
        for K in K_list:
            nested = nested_neighbors(full, K)
            matrix = _csr_rows(nested.indices, weights[:, :K], ls.p)
            out.append(SparseAffinity(matrix, sigma, (i, K)))
    return out


def build_affinity_independent(X, landmark_sets, K_list, K_prime=None):
    """Reference construction without reuse: a fresh search for every K.

    The candidate stage (``K_prime``) and bandwidth match the batch route so
    results are comparable entry by entry.
    """
    K_list = [int(k) for k in K_list]
    out = []
    for i, ls in enumerate(landmark_sets):
        kp = default_k_prime(K_list[-1], ls.p) if K_prime is None else K_prime
        searches = {K: approx_knn(X, ls, K, kp) for K in reversed(K_list)}
        sigma = estimate_sigma(searches[K_list[-1]])
        for K in K_list:
            aff = build_affinity(searches[K], sigma, ls.p)
            aff.source = (i, K)
            out.append(aff)
    return out
