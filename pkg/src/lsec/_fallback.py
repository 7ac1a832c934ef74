"""Pure NumPy versions of the compiled kernels (same signatures and tie rules)."""
import numpy as np

_CHUNK = 65536


def assign_nearest(X, C, num_threads=1):
    n = X.shape[0]
    labels = np.zeros(n, dtype=np.int64)
    best = ((X - C[0]) ** 2).sum(axis=1)
    for j in range(1, C.shape[0]):
        dj = ((X - C[j]) ** 2).sum(axis=1)
        closer = dj < best
        labels[closer] = j
        best = np.where(closer, dj, best)
    return labels, best


def knn_candidates(X, L, cand, owner, K, num_threads=1):
    n = X.shape[0]
    idx = np.empty((n, K), dtype=np.int64)
    dist = np.empty((n, K), dtype=np.float64)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        c = cand[owner[start:stop]]
        d2 = ((X[start:stop, None, :] - L[c]) ** 2).sum(axis=2)
        order = np.lexsort((c, d2), axis=-1)[:, :K]
        idx[start:stop] = np.take_along_axis(c, order, axis=1)
        dist[start:stop] = np.take_along_axis(d2, order, axis=1)
    return idx, dist
