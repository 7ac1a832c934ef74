"""Two-dimensional shape families for testing nonlinear clustering.

Each family returns points with the generating component as ground truth:

======  =======  ===============================================
shape   classes  layout
======  =======  ===============================================
``tb``  3        two interleaved banana arcs and a round blob
``sf``  4        head ring, two eye blobs and a mouth arc
``cc``  3        concentric rings of radius 1, 2 and 3
``cg``  11       two concentric rings beside a 3x3 grid of blobs
``fl``  13       flower of 13 radial petals
======  =======  ===============================================

Gaussian jitter with standard deviation ``noise * radius`` is added to every
point, where ``radius`` is the family's characteristic radius (1 for all
current families).
"""
from __future__ import annotations

import numpy as np

from ._seeding import rng as make_rng
from .errors import ParamError

CLASS_COUNTS = {"tb": 3, "sf": 4, "cc": 3, "cg": 11, "fl": 13}
CC_RADII = (1.0, 2.0, 3.0)
_CHAR_RADIUS = 1.0


def _split(n, weights):
    w = np.asarray(weights, dtype=float)
    counts = np.floor(n * w / w.sum()).astype(int)
    counts[: n - counts.sum()] += 1
    return counts


def _arc(rng, count, center, radius, lo, hi):
    theta = rng.uniform(lo, hi, count)
    return np.column_stack([center[0] + radius * np.cos(theta),
                            center[1] + radius * np.sin(theta)])


def _blob(rng, count, center, spread):
    return np.asarray(center) + spread * rng.standard_normal((count, 2))


def _two_bananas(rng, n):
    c = _split(n, [1.0, 1.0, 0.6])
    return [
        _arc(rng, c[0], (0.0, 0.0), 1.0, 0.0, np.pi),
        _arc(rng, c[1], (1.0, 0.4), 1.0, np.pi, 2 * np.pi),
        _blob(rng, c[2], (4.0, 0.2), 0.3),
    ]


def _smiling_face(rng, n):
    c = _split(n, [3.0, 0.5, 0.5, 1.2])
    return [
        _arc(rng, c[0], (0.0, 0.0), 4.0, 0.0, 2 * np.pi),
        _blob(rng, c[1], (-1.4, 1.3), 0.3),
        _blob(rng, c[2], (1.4, 1.3), 0.3),
        _arc(rng, c[3], (0.0, 0.5), 2.2, 1.15 * np.pi, 1.85 * np.pi),
    ]


def _concentric_circles(rng, n):
    c = _split(n, [1.0, 1.0, 1.0])
    return [_arc(rng, c[i], (0.0, 0.0), r, 0.0, 2 * np.pi) for i, r in enumerate(CC_RADII)]


def _circles_gaussians(rng, n):
    c = _split(n, [1.0, 1.5] + [0.4] * 9)
    parts = [_arc(rng, c[0], (0.0, 0.0), 1.0, 0.0, 2 * np.pi),
             _arc(rng, c[1], (0.0, 0.0), 2.0, 0.0, 2 * np.pi)]
    k = 2
    for gx in range(3):
        for gy in range(3):
            parts.append(_blob(rng, c[k], (4.0 + 1.6 * gx, -1.6 + 1.6 * gy), 0.2))
            k += 1
    return parts


def _flower(rng, n, petals=13):
    c = _split(n, [1.0] * petals)
    parts = []
    for k in range(petals):
        r = rng.uniform(1.5, 4.5, c[k])
        theta = 2 * np.pi * k / petals + 0.05 * rng.standard_normal(c[k])
        parts.append(np.column_stack([r * np.cos(theta), r * np.sin(theta)]))
    return parts


_FAMILIES = {
    "tb": _two_bananas,
    "sf": _smiling_face,
    "cc": _concentric_circles,
    "cg": _circles_gaussians,
    "fl": _flower,
}


def gen_synthetic(shape: str, n: int, noise: float = 0.05, seed: int = 0):
    """Generate ``n`` points of a shape family.

    Returns
    -------
    X : ndarray of shape (n, 2)
    labels : ndarray of shape (n,)
        Generating component of each point, 0-based.
    """
    if shape not in _FAMILIES:
        raise ParamError(f"unknown shape {shape!r}; choose from {sorted(_FAMILIES)}")
    classes = CLASS_COUNTS[shape]
    if n < 10 * classes:
        raise ParamError(f"shape {shape!r} needs n >= {10 * classes}, got {n}")
    if noise < 0:
        raise ParamError("noise must be non-negative")
    rng = make_rng(seed)
    parts = _FAMILIES[shape](rng, n)
    X = np.vstack(parts)
    y = np.concatenate([np.full(len(p), i, dtype=np.int64) for i, p in enumerate(parts)])
    if noise > 0:
        X = X + noise * _CHAR_RADIUS * rng.standard_normal(X.shape)
    order = rng.permutation(n)
    return X[order], y[order]
