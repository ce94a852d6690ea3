"""Depths built from distances: Mahalanobis, L_p, spatial, beta-skeleton and lens."""
from __future__ import annotations

import numpy as np

from ..dataset import Dataset, validate_dissimilarity
from ..errors import DataError
from ..scatter import ScatterModel, moment_scatter
from ._common import COINCIDE_TOL, n_choose, prepare


def _model_for(data, model):
    if model is None:
        return moment_scatter(data)
    if not isinstance(model, ScatterModel):
        raise TypeError("model must be a ScatterModel")
    return model


def mahalanobis_depth(y, data=None, model: ScatterModel | None = None) -> float:
    """``1 / (1 + (y - mu)' Sigma^{-1} (y - mu))``.

    Pass either a sample (the moment model is fitted) or a fitted ``model``.
    """
    if data is None and model is None:
        raise ValueError("need a sample or a scatter model")
    model = _model_for(data, model)
    q = np.asarray(y, dtype=float).ravel()
    if q.size != model.d:
        raise DataError(f"query has dimension {q.size}, model has dimension {model.d}")
    return float(1.0 / (1.0 + model.mahalanobis_sq(q)[0]))


def lp_depth(y, data, p: float = 2.0, model: ScatterModel | None = None) -> float:
    """``1 / (1 + mean_i ||y - x_i||_p)``, optionally on whitened data."""
    if p < 1:
        raise ValueError("p must be >= 1")
    q, X = prepare(y, data)
    if model is not None:
        X = model.whiten_points(X)
        q = model.whiten_points(q)[0]
    dist = np.linalg.norm(X - q, ord=p, axis=1)
    return float(1.0 / (1.0 + dist.mean()))


def spatial_depth(y, data, model: ScatterModel | None = None) -> float:
    """``1 - || mean_i (y - x_i) / ||y - x_i|| ||`` with ``0/0 = 0``.

    With a scatter ``model`` sample and query are whitened first.
    """
    q, X = prepare(y, data)
    if model is not None:
        X = model.whiten_points(X)
        q = model.whiten_points(q)[0]
    D = q - X
    norms = np.linalg.norm(D, axis=1)
    scale = max(float(np.abs(X).max()), float(np.abs(q).max()), 1.0)
    nz = norms > COINCIDE_TOL * scale
    U = np.zeros_like(D)
    U[nz] = D[nz] / norms[nz, None]
    return float(max(0.0, 1.0 - np.linalg.norm(U.mean(axis=0))))


def beta_skeleton_count(y, data, beta: float = 2.0, strict: bool = True,
                        chunk: int = 256) -> int:
    """Number of pairs ``i < j`` whose beta-influence region contains ``y``.

    The region is the intersection of the two balls of radius
    ``beta/2 * ||x_i - x_j||`` centred at ``beta/2 x_i + (1 - beta/2) x_j``
    and at the mirrored point. ``strict`` uses open balls.

    Expanding the squares, ``y`` is in the first ball iff
    ``||y - x_j||^2 < beta <y - x_j, x_i - x_j>``, a test free of square
    roots and centre points, so boundary cases on integer data are exact.
    """
    if beta < 1:
        raise ValueError("beta must be >= 1")
    q, X = prepare(y, data)
    n = X.shape[0]
    if n < 2:
        raise DataError("beta-skeleton depth needs at least 2 points")
    V = X - q                                # x_i - y
    sq = np.einsum("ij,ij->i", V, V)
    total = 0
    for s in range(0, n, chunk):
        G = V[s:s + chunk] @ V.T             # <x_i - y, x_j - y>
        a = sq[s:s + chunk, None]            # ||x_i - y||^2
        b = sq[None, :]
        # ||y-x_j||^2 < beta <y-x_j, x_i-x_j>  <=>  b < beta (b - G)
        m1 = beta * (b - G) - b
        m2 = beta * (a - G) - a
        ok = (m1 > 0) & (m2 > 0) if strict else (m1 >= 0) & (m2 >= 0)
        i = np.arange(s, min(s + chunk, n))[:, None]
        ok &= np.arange(n)[None, :] > i
        total += int(ok.sum())
    return total


def beta_skeleton_depth(y, data, beta: float = 2.0, strict: bool = True) -> float:
    """beta-skeleton depth; ``beta = 2`` is lens depth, ``beta = 1`` spherical depth."""
    q, X = prepare(y, data)
    return beta_skeleton_count(q, X, beta, strict) / n_choose(X.shape[0], 2)


def lens_depth_ordinal(query, dissimilarity=None, strict: bool = True) -> float:
    """Lens depth from ordinal dissimilarities only.

    ``dissimilarity`` is the n x n sample matrix (or a Dataset carrying
    one). ``query`` is either the index of a sample point or a length-n row
    of dissimilarities between the query and every sample point. A pair
    ``{i, j}`` counts when the query is closer to both ends than they are to
    each other.
    """
    if isinstance(dissimilarity, Dataset):
        if dissimilarity.dissimilarity is None:
            raise DataError("dataset carries no dissimilarity matrix")
        D = dissimilarity.dissimilarity
    elif dissimilarity is None:
        raise DataError("lens depth needs a dissimilarity matrix")
    else:
        D = validate_dissimilarity(dissimilarity)
    n = D.shape[0]
    if n < 2:
        raise DataError("lens depth needs at least 2 points")
    if np.isscalar(query) or np.ndim(query) == 0:
        k = int(query)
        if not 0 <= k < n:
            raise DataError(f"query index {k} out of range")
        row = D[k]
    else:
        row = np.asarray(query, dtype=float).ravel()
        if row.size != n:
            raise DataError(f"query row has {row.size} entries, sample has {n} points")
        if np.any(row < 0) or not np.all(np.isfinite(row)):
            raise DataError("query dissimilarities must be finite and nonnegative")
    if strict:
        close = row[:, None] < D
        both = close & close.T
    else:
        close = row[:, None] <= D
        both = close & close.T
    iu = np.triu_indices(n, k=1)
    return float(both[iu].sum() / n_choose(n, 2))
