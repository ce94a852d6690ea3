from __future__ import annotations

import math

import numpy as np

from ..dataset import as_points, as_query
from ..numerics.geometry import diameter_scale

# angular tolerance (radians) for deciding that two directions coincide
ANG_TOL = 1e-9
# relative tolerance for a sample point coinciding with the query
COINCIDE_TOL = 1e-12


def prepare(y, data, allow_missing=False):
    X = as_points(data, allow_missing=allow_missing)
    q = as_query(y, X.shape[1])
    if not allow_missing and not np.all(np.isfinite(q)):
        raise ValueError("query point has missing coordinates")
    return q, X


def split_coincident(y, X):
    """Return (vectors x_i - y that are nonzero, number of x_i equal to y)."""
    V = X - y
    scale = max(diameter_scale(np.vstack([X, y])), 0.0)
    norms = np.linalg.norm(V, axis=1)
    zero = norms <= COINCIDE_TOL * scale if scale > 0 else norms == 0
    return V[~zero], int(zero.sum())


def combination_blocks(n: int, k: int, max_rows: int = 1 << 18):
    """Yield all k-subsets of range(n) in lexicographic order, in blocks.

    Each block is an (m, k) int array. Blocks are grouped by the leading
    ``k - 2`` indices, with the trailing pairs generated in one shot.
    """
    if k < 1 or k > n:
        return
    if k == 1:
        yield np.arange(n)[:, None]
        return
    iu, ju = np.triu_indices(n, k=1)
    pairs = np.column_stack([iu, ju])
    # pairs with first index >= s form a suffix; offsets[s] is its start
    counts = np.arange(n - 1, -1, -1)
    offsets = np.concatenate([[0], np.cumsum(counts)])
    if k == 2:
        for start in range(0, pairs.shape[0], max_rows):
            yield pairs[start:start + max_rows]
        return
    buf = []
    size = 0
    import itertools
    for prefix in itertools.combinations(range(n - 2), k - 2):
        s = prefix[-1] + 1
        tail = pairs[offsets[s]:]
        if tail.shape[0] == 0:
            continue
        block = np.empty((tail.shape[0], k), dtype=np.intp)
        block[:, : k - 2] = prefix
        block[:, k - 2:] = tail
        buf.append(block)
        size += tail.shape[0]
        if size >= max_rows:
            yield np.concatenate(buf)
            buf, size = [], 0
    if buf:
        yield np.concatenate(buf)


def n_choose(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def cofactor_normals(M: np.ndarray) -> np.ndarray:
    """Generalized cross products of stacked (d-1) x d matrices.

    For ``M`` of shape (b, d-1, d) returns ``c`` of shape (b, d) with
    ``c[k] @ v == det(vstack([M[k], v]))`` for every ``v``.
    """
    b, r, d = M.shape
    if d == 1:
        return np.ones((b, 1))
    if d == 2:
        return np.column_stack([-M[:, 0, 1], M[:, 0, 0]])
    if d == 3:
        return np.cross(M[:, 0, :], M[:, 1, :])
    out = np.empty((b, d))
    for c in range(d):
        minor = np.delete(M, c, axis=2)
        out[:, c] = (-1.0) ** (d - 1 + c) * np.linalg.det(minor)
    return out
