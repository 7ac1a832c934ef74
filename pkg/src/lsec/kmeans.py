"""Lloyd k-means with k-means++ seeding, and the sampled "light" variant.

Empty clusters are repaired by moving their center onto the point that is
currently farthest from its own center, so every returned cluster is
non-empty whenever the data hold at least ``k`` distinct points.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from ._seeding import rng as make_rng
from .errors import DimMismatch, ParamError


@dataclass
class KmeansResult:
    centers: np.ndarray
    labels: np.ndarray
    inertia: float
    iterations: int
    trace: list = field(default_factory=list)


def assign_nearest(X, C):
    """Label each row of ``X`` with its nearest row of ``C``.

    Ties go to the lowest center index.

    Returns
    -------
    labels : ndarray of int64
    inertia : float
        Sum of squared distances to the assigned centers.
    """
    X = np.asarray(X, dtype=np.float64)
    C = np.asarray(C, dtype=np.float64)
    if X.ndim != 2 or C.ndim != 2 or X.shape[1] != C.shape[1]:
        raise DimMismatch(f"data {X.shape} and centers {C.shape} disagree on dimension")
    labels, d2 = _backend.assign_nearest(X, C)
    return labels, float(d2.sum())


def _plusplus(X, k, rng):
    """Greedy k-means++: each step keeps the best of ``2 + ln k`` sampled candidates."""
    n = X.shape[0]
    trials = 2 + int(np.log(k))
    centers = np.empty((k, X.shape[1]))
    first = rng.integers(n)
    centers[0] = X[first]
    closest = ((X - X[first]) ** 2).sum(axis=1)
    for j in range(1, k):
        total = closest.sum()
        if total <= 0.0:
            pick = int(rng.integers(n))
        else:
            cand = np.searchsorted(np.cumsum(closest), rng.random(trials) * total, side="right")
            cand = np.minimum(cand, n - 1)
            best_pot = np.inf
            pick = int(cand[0])
            for c in cand:
                pot = np.minimum(closest, ((X - X[c]) ** 2).sum(axis=1)).sum()
                if pot < best_pot:
                    best_pot, pick = pot, int(c)
        centers[j] = X[pick]
        np.minimum(closest, ((X - X[pick]) ** 2).sum(axis=1), out=closest)
    return centers


def _assign_repaired(X, centers):
    labels, d2 = _backend.assign_nearest(X, centers)
    k = centers.shape[0]
    for _ in range(k):
        counts = np.bincount(labels, minlength=k)
        empty = np.flatnonzero(counts == 0)
        if empty.size == 0 or not d2.any():
            break
        taken = set()
        order = np.argsort(-d2, kind="stable")
        pos = 0
        for j in empty:
            while pos < order.size and (order[pos] in taken or d2[order[pos]] <= 0.0):
                pos += 1
            if pos == order.size:
                break
            taken.add(order[pos])
            centers[j] = X[order[pos]]
        labels, d2 = _backend.assign_nearest(X, centers)
    return labels, d2


def _means(X, labels, centers):
    k = centers.shape[0]
    counts = np.bincount(labels, minlength=k)
    out = centers.copy()
    nz = counts > 0
    for t in range(X.shape[1]):
        sums = np.bincount(labels, weights=X[:, t], minlength=k)
        out[nz, t] = sums[nz] / counts[nz]
    return out


def kmeans(X, k, seed=0, max_iter=100, tol=1e-4) -> KmeansResult:
    """Lloyd iterations from k-means++ seeds.

    Stops when the Frobenius norm of the center shift falls below ``tol``
    times the root total variance of ``X``, or after ``max_iter`` updates.
    ``trace`` holds the inertia after every assignment step.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise ParamError(f"k must lie in [1, {n}], got {k}")
    if k == n:
        return KmeansResult(X.copy(), np.arange(n, dtype=np.int64), 0.0, 0, [0.0])
    rng = make_rng(seed)
    centers = _plusplus(X, k, rng)
    scale = np.sqrt(X.var(axis=0).sum())
    threshold = tol * scale
    trace = []
    it = 0
    for it in range(1, max_iter + 1):
        labels, d2 = _assign_repaired(X, centers)
        trace.append(float(d2.sum()))
        updated = _means(X, labels, centers)
        shift = np.sqrt(((updated - centers) ** 2).sum())
        centers = updated
        if shift <= threshold:
            break
    labels, d2 = _assign_repaired(X, centers)
    inertia = float(d2.sum())
    trace.append(inertia)
    return KmeansResult(centers, labels, inertia, it, trace)


def default_reps(n, k):
    return min(n, max(10 * k, 1000))


def light_kmeans(X, k, p_rep=None, seed=0, max_iter=100, tol=1e-4) -> KmeansResult:
    """Fit centers on ``p_rep`` uniformly sampled rows, then label all rows.

    With ``p_rep == n`` this is exactly ``kmeans(X, k, seed)``.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if p_rep is None:
        p_rep = default_reps(n, k)
    if not 1 <= k <= p_rep <= n:
        raise ParamError(f"need 1 <= k <= p_rep <= n, got k={k}, p_rep={p_rep}, n={n}")
    if p_rep == n:
        return kmeans(X, k, seed=seed, max_iter=max_iter, tol=tol)
    sample = np.sort(make_rng(seed, 1).choice(n, size=p_rep, replace=False))
    fit = kmeans(X[sample], k, seed=seed, max_iter=max_iter, tol=tol)
    labels, d2 = _backend.assign_nearest(X, fit.centers)
    return KmeansResult(fit.centers, labels, float(d2.sum()), fit.iterations, fit.trace)
