"""Exact halfspace (Tukey) depth.

The depth of ``y`` is the smallest number of sample points in a closed
halfspace containing ``y``, divided by ``n``. With ``v_i = x_i - y`` this is
``z + min_u #{i : <u, v_i> > 0}`` where ``z`` counts points equal to ``y`` and
the minimum runs over directions ``u`` orthogonal to none of the ``v_i``
(open cells of the arrangement of hyperplanes ``v_i^perp``).

Every open cell of an arrangement spanning R^r has a two-dimensional face.
That face lies in the plane orthogonal to r-2 of the vectors, so the
minimum can be found by running a planar angular sweep in the plane
orthogonal to each (r-2)-subset, which costs ``O(n^{d-1} log n)``. The
hyperplane-enumeration variant is kept as an independent ``O(n^d)`` route.
"""
from __future__ import annotations

import numpy as np

from ._common import ANG_TOL, cofactor_normals, combination_blocks, prepare, split_coincident

TWO_PI = 2.0 * np.pi
_HALF_PI = 0.5 * np.pi
_SENTINEL = 20.0  # beyond every query window in _sweep2d_batched
_BATCH_STRIDE = 32.0
_BATCH_CELLS = 1 << 21  # working-set cap for batched sweeps


def univariate_counts(y: float, x: np.ndarray) -> tuple[int, int]:
    """(#{x_i <= y}, #{x_i >= y}) for a one-dimensional sample."""
    return int(np.count_nonzero(x <= y)), int(np.count_nonzero(x >= y))


def _sweep2d_batched(W: np.ndarray, valid: np.ndarray) -> np.ndarray:
    """Minimum over open half-planes of #{k valid : <u, w_k> > 0}, per batch.

    ``W`` has shape (B, m, 2); ``valid`` (B, m) marks usable vectors. The
    open half-plane of angles ``(phi, phi + pi)`` only changes its content
    when ``phi`` crosses some ``theta_k`` or ``theta_k + pi``, so it suffices
    to evaluate it just past each of those events. Angles closer than
    ANG_TOL are treated as equal.
    """
    B, m = valid.shape
    if m == 0:
        return np.zeros(B, dtype=np.int64)
    theta = np.mod(np.arctan2(W[..., 1], W[..., 0]), TWO_PI)
    theta = np.where(theta >= TWO_PI, 0.0, theta)
    ext = np.concatenate([np.where(valid, theta, _SENTINEL),
                          np.where(valid, theta + TWO_PI, _SENTINEL)], axis=1)
    ext.sort(axis=1)
    offs = (np.arange(B) * _BATCH_STRIDE)[:, None]
    flat = (ext + offs).ravel()
    ev = np.concatenate([theta, np.mod(theta + np.pi, TWO_PI)], axis=1)
    vv = np.concatenate([valid, valid], axis=1)
    # increasing needles make the binary searches much cheaper
    order = np.argsort(ev, axis=1)
    ev = np.take_along_axis(ev, order, axis=1) + offs
    vv = np.take_along_axis(vv, order, axis=1)
    lo = np.searchsorted(flat, (ev + ANG_TOL).ravel(), side="right")
    hi = np.searchsorted(flat, (ev + np.pi + ANG_TOL).ravel(), side="right")
    cnt = (hi - lo).reshape(B, 2 * m)
    cnt = np.where(vv, cnt, np.iinfo(np.int64).max)
    best = cnt.min(axis=1)
    return np.where(valid.any(axis=1), best, 0).astype(np.int64)


def _householder_tails(V: np.ndarray, pivots: np.ndarray) -> np.ndarray:
    """Coordinates of every row of V in the orthogonal complement of each pivot.

    Returns an array of shape (len(pivots), len(V), d-1).
    """
    P = pivots / np.linalg.norm(pivots, axis=1, keepdims=True)
    # reflect each unit pivot onto -sign(p_0) e_1, then drop the first coordinate
    w = P.copy()
    w[:, 0] += np.where(P[:, 0] >= 0, 1.0, -1.0)
    ww = np.einsum("ij,ij->i", w, w)
    coef = (2.0 * (V @ w.T) / ww[None, :]).T
    H = V[None, :, :] - coef[:, :, None] * w[:, None, :]
    return H[:, :, 1:]


def _reduce_to_span(V):
    """Express V in an orthonormal basis of its linear span."""
    if V.shape[0] == 0:
        return V
    _, s, vt = np.linalg.svd(V, full_matrices=False)
    r = int((s > ANG_TOL * s[0]).sum()) if s.size and s[0] > 0 else 0
    return V @ vt[:r].T


def min_open_count(V: np.ndarray) -> int:
    """``min_u #{k : <u, v_k> > 0}`` over open cells, for nonzero rows of V.

    After reducing to the linear span (dimension r), every open cell has a
    two-dimensional face lying in the plane orthogonal to some r-2
    independent vectors T. Near that face the vectors outside span(T) keep
    the signs they have on the face, found by a planar sweep, while the
    vectors inside span(T) can take any sign pattern of an open cell of
    their own arrangement. Minimizing over T covers every cell.
    """
    V = _reduce_to_span(V)
    m, r = V.shape
    if m == 0 or r == 0:
        return 0
    if r == 1:
        v = V[:, 0]
        return int(min(np.count_nonzero(v > 0), np.count_nonzero(v < 0)))
    if r == 2:
        return int(_sweep2d_batched(V[None], np.ones((1, m), dtype=bool))[0])
    vn = np.linalg.norm(V, axis=1)
    best = m
    rows = max(1, _BATCH_CELLS // (4 * m))
    for block in combination_blocks(m, r - 2, max_rows=rows):
        M = np.swapaxes(V[block], 1, 2)  # (b, r, r-2)
        Q, R = np.linalg.qr(M, mode="complete")
        diag = np.abs(np.diagonal(R, axis1=1, axis2=2))
        indep = (diag > ANG_TOL * vn[block]).all(axis=1)
        if not indep.all():
            Q = Q[indep]
            if Q.shape[0] == 0:
                continue
        W = V @ Q[:, :, r - 2:]  # (b, m, 2) coordinates in the face plane
        inspan = np.linalg.norm(W, axis=2) <= ANG_TOL * vn[None, :]
        planar = _sweep2d_batched(W, ~inspan)
        k = inspan.sum(axis=1)
        cand = planar.copy()
        for t in np.flatnonzero(k > r - 2):
            # vectors of span(T) beyond T itself: solve their own arrangement
            sub = V[inspan[t]] @ Q[t, :, : r - 2]
            cand[t] += min_open_count(sub)
        best = min(best, int(cand.min()))
        if best == 0:
            break
    return best


def _enumerate_min_open_count(V: np.ndarray) -> int:
    """O(n^d) route: normals of hyperplanes through d-1 of the vectors."""
    V = _reduce_to_span(V)
    m, r = V.shape
    if m == 0 or r == 0:
        return 0
    if r == 1:
        return min_open_count(V)
    vn = np.linalg.norm(V, axis=1)
    best = m
    for block in combination_blocks(m, r - 1):
        normals = cofactor_normals(V[block])
        nn = np.linalg.norm(normals, axis=1)
        ok = nn > ANG_TOL * np.prod(vn[block], axis=1)
        if not ok.any():
            continue
        normals = normals[ok] / nn[ok, None]
        dots = normals @ V.T  # (b, m)
        zero = np.abs(dots) <= ANG_TOL * vn[None, :]
        pos = np.count_nonzero((dots > 0) & ~zero, axis=1)
        neg = np.count_nonzero((dots < 0) & ~zero, axis=1)
        nz = zero.sum(axis=1)
        generic = nz == r - 1
        if generic.any():
            best = min(best, int(np.minimum(pos, neg)[generic].min()))
        for k in np.flatnonzero(~generic):
            Z = V[zero[k]]
            tails = _householder_tails(Z, normals[k:k + 1])[0]
            inner = _enumerate_min_open_count(tails)
            best = min(best, int(min(pos[k], neg[k])) + inner)
        if best == 0:
            break
    return best


def halfspace_count(y, data, method: str = "auto") -> int:
    """Number of sample points in the shallowest closed halfspace containing ``y``."""
    q, X = prepare(y, data)
    n, d = X.shape
    if d == 1:
        le, ge = univariate_counts(q[0], X[:, 0])
        return min(le, ge)
    V, z = split_coincident(q, X)
    if method in ("auto", "recursive"):
        return z + min_open_count(V)
    if method == "enumerate":
        return z + _enumerate_min_open_count(V)
    raise ValueError(f"unknown halfspace method {method!r}")


def halfspace_depth(y, data, method: str = "auto") -> float:
    """Exact halfspace depth of ``y`` w.r.t. the sample.

    ``method`` is ``"auto"``/``"recursive"`` (planar angular sweeps in the
    planes orthogonal to (d-2)-subsets, ``O(n^{d-1} log n)``) or ``"enumerate"``
    (hyperplanes through ``y`` and ``d-1`` sample points, ``O(n^d)``). Both
    count coincident points on both sides and are exact for points in
    general position; near-degenerate configurations are resolved with an
    angular tolerance of 1e-9 rad.
    """
    q, X = prepare(y, data)
    return halfspace_count(q, X, method) / X.shape[0]


def halfspace_depth_all(data, method: str = "auto", leave_one_out: bool = False) -> np.ndarray:
    """Halfspace depths of every sample point (optionally w.r.t. the others)."""
    X = np.asarray(data, dtype=float) if not hasattr(data, "points") else data.complete_points()
    n = X.shape[0]
    out = np.empty(n)
    for i in range(n):
        if leave_one_out:
            rest = np.delete(X, i, axis=0)
            out[i] = halfspace_count(X[i], rest, method) / (n - 1)
        else:
            out[i] = halfspace_count(X[i], X, method) / n
    return out
