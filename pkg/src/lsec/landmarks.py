"""Divide-and-conquer landmark selection.

The residual sum of squares between points and their nearest landmark is
minimised approximately by recursive splitting:

* a subset with at most ``10 * k`` points is solved directly by k-means;
* a subset needing ``k <= alpha`` landmarks is solved by light-k-means;
* otherwise it is split into ``ceil(k / alpha)`` parts by light-k-means,
  each part receives a share of ``k`` proportional to its size (capped at
  ``alpha``, at least 1), and the parts are solved recursively.

The union of all subset centers is the landmark set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from ._seeding import seed_sequence
from .errors import DimMismatch, ParamError
from .kmeans import kmeans, light_kmeans

DIRECT_FACTOR = 10


@dataclass
class LandmarkSet:
    points: np.ndarray
    assignment: np.ndarray
    rss: float

    @property
    def p(self) -> int:
        return self.points.shape[0]


def rss(X, R, assignment) -> float:
    X = np.asarray(X, dtype=np.float64)
    R = np.asarray(R, dtype=np.float64)
    assignment = np.asarray(assignment)
    if X.ndim != 2 or R.ndim != 2 or X.shape[1] != R.shape[1] or assignment.shape != (X.shape[0],):
        raise DimMismatch("data, landmarks and assignment shapes disagree")
    if assignment.size and (assignment.min() < 0 or assignment.max() >= R.shape[0]):
        raise DimMismatch("assignment index out of range")
    return float(((X - R[assignment]) ** 2).sum())


def allocate(sizes, k, alpha):
    """Split a budget of ``k`` landmarks over parts of the given sizes.

    Shares are proportional to size, at least 1 and at most ``alpha`` (when
    the cap is feasible); a part smaller than its share keeps only as many
    landmarks as it has points and the surplus goes to the largest parts
    that still have room.
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    h = sizes.size
    cap = alpha if h * alpha >= k else k
    ideal = k * sizes / sizes.sum()
    share = np.clip(np.floor(ideal).astype(np.int64), 1, cap)
    # hand out the remainder by largest fractional part, respecting the cap
    while share.sum() < k:
        room = share < cap
        gain = np.where(room, ideal - share, -np.inf)
        share[int(np.argmax(gain))] += 1
    while share.sum() > k:
        spare = np.where(share > 1, share - ideal, -np.inf)
        share[int(np.argmax(spare))] -= 1
    surplus = int(np.maximum(share - sizes, 0).sum())
    share = np.minimum(share, sizes)
    for j in np.argsort(-sizes, kind="stable"):
        if surplus == 0:
            break
        extra = min(surplus, int(sizes[j] - share[j]))
        share[j] += extra
        surplus -= extra
    return share


def _solve(X, k, alpha, ss):
    n = X.shape[0]
    if k >= n:
        return X.copy()
    if n <= DIRECT_FACTOR * k:
        return kmeans(X, k, seed=ss).centers
    if k <= alpha:
        return light_kmeans(X, k, seed=ss).centers
    h = math.ceil(k / alpha)
    if n <= DIRECT_FACTOR * h:
        split = kmeans(X, h, seed=ss)
    else:
        split = light_kmeans(X, h, seed=ss)
    sizes = np.bincount(split.labels, minlength=h)
    live = np.flatnonzero(sizes)
    shares = allocate(sizes[live], k, alpha)
    parts = []
    for i, (part, share) in enumerate(zip(live, shares)):
        child = seed_sequence(ss, 2, i)
        parts.append(_solve(X[split.labels == part], int(share), alpha, child))
    return np.vstack(parts)


def _repair_orphans(X, points, labels, d2, rounds=5):
    p = points.shape[0]
    for _ in range(rounds):
        orphans = np.flatnonzero(np.bincount(labels, minlength=p) == 0)
        if orphans.size == 0 or not d2.any():
            break
        far = np.argsort(-d2, kind="stable")[: orphans.size]
        far = far[d2[far] > 0]
        points[orphans[: far.size]] = X[far]
        labels, d2 = _backend.assign_nearest(X, points)
    return labels, d2


def select_landmarks(X, p, alpha=50, seed=0) -> LandmarkSet:
    """Choose ``p`` landmarks and assign every point to its nearest one."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if not 1 <= p <= n:
        raise ParamError(f"p must lie in [1, {n}], got {p}")
    if alpha < 1:
        raise ParamError("alpha must be >= 1")
    if p == n:
        return LandmarkSet(X.copy(), np.arange(n, dtype=np.int64), 0.0)
    points = _solve(X, p, alpha, seed_sequence(seed))
    labels, d2 = _backend.assign_nearest(X, points)
    labels, d2 = _repair_orphans(X, points, labels, d2)
    return LandmarkSet(points, labels, float(d2.sum()))


def gen_landmark_sets(X, num_sets, p, alpha=50, seed=0):
    """``num_sets`` independent selections; set ``i`` uses stream ``(seed, i)``."""
    if num_sets < 1:
        raise ParamError("num_sets must be >= 1")
    return [select_landmarks(X, p, alpha, seed_sequence(seed, i)) for i in range(num_sets)]
