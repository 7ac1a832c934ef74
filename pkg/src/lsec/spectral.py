"""Spectral partitioning of a bipartite graph through its small side.

For a nonnegative ``n x p`` cross-affinity ``B`` with row degrees ``d_x`` and
column degrees ``d_r``, the bottom eigenvectors on the point side are
obtained from the ``p x p`` generalized problem

    (D_r - B^T D_x^{-1} B) v = lambda D_r v,    U = D_x^{-1} B V,

which is solved densely after the symmetric reduction
``D_r^{-1/2} L D_r^{-1/2}``. Columns with zero degree are dropped first.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import ConvergenceError, DegenerateGraph, DimMismatch, ParamError
from .kmeans import kmeans, light_kmeans

RESIDUAL_TOL = 1e-8


@dataclass
class BipartiteDegrees:
    d_x: np.ndarray
    d_r: np.ndarray


@dataclass
class ReducedProblem:
    """Laplacian on the surviving columns; ``columns[j]`` is the original index of column ``j``."""

    laplacian: np.ndarray
    d_r: np.ndarray
    columns: np.ndarray


@dataclass
class Embedding:
    vectors: np.ndarray
    eigenvalues: np.ndarray

    @property
    def c(self) -> int:
        return self.vectors.shape[1]


def _csr(B):
    matrix = getattr(B, "matrix", B)
    return sp.csr_matrix(matrix, dtype=np.float64)


def degrees(B) -> BipartiteDegrees:
    B = _csr(B)
    d_x = np.asarray(B.sum(axis=1)).ravel()
    d_r = np.asarray(B.sum(axis=0)).ravel()
    return BipartiteDegrees(d_x, d_r)


def reduced_laplacian(B, deg: BipartiteDegrees | None = None) -> ReducedProblem:
    B = _csr(B)
    if deg is None:
        deg = degrees(B)
    if not (deg.d_x > 0).all():
        raise DegenerateGraph(f"{int((deg.d_x <= 0).sum())} point(s) have no edges")
    columns = np.flatnonzero(deg.d_r > 0)
    Bs = B if columns.size == B.shape[1] else B[:, columns]
    scaled = sp.diags(1.0 / deg.d_x) @ Bs
    gram = (Bs.T @ scaled).toarray()
    d_r = deg.d_r[columns]
    L = np.diag(d_r) - gram
    L = 0.5 * (L + L.T)
    return ReducedProblem(L, d_r, columns)


def _fix_signs(V):
    pivot = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivot, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def bottom_eigen(L, d_r, c):
    """The ``c`` smallest generalized eigenpairs of ``L v = lambda diag(d_r) v``.

    Eigenvectors are ``diag(d_r)``-orthonormal, with each column's
    largest-magnitude entry made positive.
    """
    L = np.asarray(L, dtype=np.float64)
    d_r = np.asarray(d_r, dtype=np.float64)
    p = L.shape[0]
    if not 1 <= c <= p:
        raise ParamError(f"c must lie in [1, {p}], got {c}")
    if not (d_r > 0).all():
        raise DegenerateGraph("column degrees must be positive")
    s = 1.0 / np.sqrt(d_r)
    M = L * s[:, None] * s[None, :]
    M = 0.5 * (M + M.T)
    try:
        w, W = scipy.linalg.eigh(M, subset_by_index=[0, c - 1], driver="evr")
    except (np.linalg.LinAlgError, ValueError):
        # MRRR can fail on tight eigenvalue clusters; full divide-and-conquer does not
        try:
            w, W = scipy.linalg.eigh(M, driver="evd")
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise ConvergenceError(str(exc)) from exc
        w, W = w[:c], W[:, :c]
    V = _fix_signs(W * s[:, None])
    resid = np.linalg.norm(L @ V - (V * d_r[:, None]) * w, axis=0)
    bound = RESIDUAL_TOL * max(np.linalg.norm(L), np.finfo(float).tiny)
    if not np.isfinite(resid).all() or resid.max(initial=0.0) > bound:
        raise ConvergenceError(f"eigen residual {resid.max():.3e} exceeds {bound:.3e}")
    return V, w


def lift_embedding(B, deg: BipartiteDegrees, V, eigenvalues, columns=None,
                   normalize=True) -> Embedding:
    """Point-side vectors ``D_x^{-1} B V``, optionally L2-normalised per row.

    ``columns`` maps the rows of ``V`` back to columns of ``B`` when
    zero-degree columns were dropped.
    """
    B = _csr(B)
    if columns is not None and columns.size != B.shape[1]:
        B = B[:, columns]
    V = np.asarray(V, dtype=np.float64)
    if B.shape[1] != V.shape[0] or deg.d_x.shape[0] != B.shape[0]:
        raise DimMismatch(f"graph {B.shape} does not match vectors {V.shape}")
    U = np.asarray(B @ V)
    U /= deg.d_x[:, None]
    if normalize:
        norms = np.sqrt(np.einsum("ij,ij->i", U, U))
        nz = norms > 0
        U[nz] /= norms[nz, None]
    return Embedding(U, np.asarray(eigenvalues))


def spectral_embedding(B, c, normalize=True) -> Embedding:
    deg = degrees(B)
    red = reduced_laplacian(B, deg)
    c = min(c, red.columns.size)
    V, w = bottom_eigen(red.laplacian, red.d_r, c)
    return lift_embedding(B, deg, V, w, red.columns, normalize=normalize)


def spectral_partition(B, c, seed=0, use_light=True, normalize=True):
    """Cluster the points of a bipartite graph into at most ``c`` groups.

    ``c`` is clamped to the number of columns with positive degree.
    """
    if c < 2:
        raise ParamError("c must be >= 2")
    emb = spectral_embedding(B, c, normalize=normalize)
    k = emb.c
    if use_light:
        return light_kmeans(emb.vectors, k, seed=seed).labels
    return kmeans(emb.vectors, k, seed=seed).labels
