"""External clustering quality: accuracy under the best label mapping, and NMI."""
from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import LengthMismatch, ParamError

UNMATCHED = -1


def _check_pair(pred, truth):
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise LengthMismatch(f"label vectors differ in shape: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise ParamError("label vectors are empty")
    return pred, truth


def contingency(pred, truth) -> np.ndarray:
    """Counts ``table[a, b]`` of points with predicted label ``a`` and true label ``b``.

    Labels are used as indices directly, so rows/columns exist for every value
    up to the maximum label.
    """
    pred, truth = _check_pair(pred, truth)
    rows = int(pred.max()) + 1
    cols = int(truth.max()) + 1
    flat = np.bincount(pred.astype(np.int64) * cols + truth.astype(np.int64),
                       minlength=rows * cols)
    return flat.reshape(rows, cols)


def optimal_map(table) -> np.ndarray:
    """Injective predicted-to-true mapping maximising the matched count.

    Returns an array ``m`` with ``m[a]`` the true label assigned to predicted
    label ``a``, or ``UNMATCHED`` when there are more predicted labels than
    true ones.
    """
    table = np.asarray(table)
    rows, cols = linear_sum_assignment(-table)
    mapping = np.full(table.shape[0], UNMATCHED, dtype=np.int64)
    mapping[rows] = cols
    return mapping


def acc(pred, truth) -> float:
    table = contingency(pred, truth)
    mapping = optimal_map(table)
    hit = mapping >= 0
    matched = table[np.nonzero(hit)[0], mapping[hit]].sum()
    return float(matched) / table.sum()


def nmi(pred, truth) -> float:
    """Mutual information normalised by the joint entropy (natural log)."""
    table = contingency(pred, truth).astype(np.float64)
    n = table.sum()
    joint = table[table > 0] / n
    h_joint = -np.sum(joint * np.log(joint))
    if h_joint <= 0.0:
        # both partitions are the single cluster
        return 1.0
    a, b = np.nonzero(table)
    outer = np.outer(table.sum(axis=1), table.sum(axis=0))[a, b]
    mi = np.sum(joint * np.log(table[a, b] * n / outer))
    return float(min(max(mi / h_joint, 0.0), 1.0))
