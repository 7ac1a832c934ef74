# cython: language_level=3
"""Compiled inner loops: nearest-center assignment and candidate-restricted KNN.

Both kernels compute squared distances by explicit differences (never the
``|x|^2 + |c|^2 - 2x.c`` expansion) so coincident points give exactly 0.
Work is split over points with OpenMP; each point is independent, so the
output does not depend on the thread count.
"""
import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange

cnp.import_array()


def assign_nearest(const double[:, ::1] X, const double[:, ::1] C, int num_threads=1):
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], k = C.shape[0]
    cdef Py_ssize_t i, j, t
    cdef double best, acc, diff
    cdef Py_ssize_t arg
    labels_arr = np.empty(n, dtype=np.int64)
    dist_arr = np.empty(n, dtype=np.float64)
    cdef cnp.int64_t[::1] labels = labels_arr
    cdef double[::1] dist = dist_arr
    if num_threads < 1:
        num_threads = 1
    for i in prange(n, nogil=True, schedule="static", num_threads=num_threads):
        best = 0.0
        arg = 0
        for t in range(d):
            diff = X[i, t] - C[0, t]
            best = best + diff * diff
        for j in range(1, k):
            acc = 0.0
            for t in range(d):
                diff = X[i, t] - C[j, t]
                acc = acc + diff * diff
                if acc >= best:
                    break
            if acc < best:
                best = acc
                arg = j
        labels[i] = arg
        dist[i] = best
    return labels_arr, dist_arr


def knn_candidates(const double[:, ::1] X, const double[:, ::1] L,
                   const cnp.int64_t[:, ::1] cand, const cnp.int64_t[::1] owner,
                   int K, int num_threads=1):
    """For each point, the K nearest among the candidate row of its owner landmark.

    Ties in distance are broken by the lower landmark index.
    """
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], kp = cand.shape[1]
    cdef Py_ssize_t i, j, t, pos, filled
    cdef cnp.int64_t li
    cdef double acc, diff
    idx_arr = np.empty((n, K), dtype=np.int64)
    dist_arr = np.empty((n, K), dtype=np.float64)
    cdef cnp.int64_t[:, ::1] idx = idx_arr
    cdef double[:, ::1] dist = dist_arr
    if num_threads < 1:
        num_threads = 1
    for i in prange(n, nogil=True, schedule="static", num_threads=num_threads):
        filled = 0
        for j in range(kp):
            li = cand[owner[i], j]
            acc = 0.0
            for t in range(d):
                diff = X[i, t] - L[li, t]
                acc = acc + diff * diff
            if filled == K:
                if acc > dist[i, K - 1] or (acc == dist[i, K - 1] and li > idx[i, K - 1]):
                    continue
                pos = K - 1
            else:
                pos = filled
                filled = filled + 1
            # insertion step keeps (dist, index) ascending
            while pos > 0 and (dist[i, pos - 1] > acc or
                               (dist[i, pos - 1] == acc and idx[i, pos - 1] > li)):
                dist[i, pos] = dist[i, pos - 1]
                idx[i, pos] = idx[i, pos - 1]
                pos = pos - 1
            dist[i, pos] = acc
            idx[i, pos] = li
    return idx_arr, dist_arr
