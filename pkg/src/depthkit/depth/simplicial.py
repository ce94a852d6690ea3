"""Simplicial depth: the fraction of closed sample simplices containing ``y``."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from scipy.optimize import nnls

from ..errors import DataError
from ._common import ANG_TOL, combination_blocks, n_choose, prepare, split_coincident

TWO_PI = 2.0 * np.pi


def _snap_angles(theta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sort angles in [0, 2pi) and merge runs closer than ANG_TOL.

    Returns the snapped angles in sorted order and the sort permutation.
    """
    order = np.argsort(theta, kind="stable")
    t = theta[order].copy()
    if t.size == 0:
        return t, order
    new_group = np.empty(t.size, dtype=bool)
    new_group[0] = True
    new_group[1:] = np.diff(t) > ANG_TOL
    head = np.maximum.accumulate(np.where(new_group, np.arange(t.size), 0))
    t = t[head]
    # the last run may wrap around to the first one
    wrap = t >= t[0] + TWO_PI - ANG_TOL
    t[wrap] = t[0]
    if wrap.any():
        order = np.concatenate([order[wrap], order[~wrap]])
        t = np.concatenate([t[wrap], t[~wrap]])
    return t, order


def _planar_separable_triples(V: np.ndarray) -> int:
    """Number of triples of nonzero vectors lying in a common open half-plane."""
    m = V.shape[0]
    if m < 3:
        return 0
    theta = np.mod(np.arctan2(V[:, 1], V[:, 0]), TWO_PI)
    t, _ = _snap_angles(theta)
    # run boundaries: position of the last element sharing each angle
    ends = np.searchsorted(t, t, side="right")
    ext = np.concatenate([t, t + TWO_PI])
    # elements strictly after each angle and strictly less than pi away
    upto = np.searchsorted(ext, t + np.pi - ANG_TOL, side="left")
    pos = np.arange(m)
    k = (upto - ends) + (ends - pos - 1)
    k = np.maximum(k, 0)
    return int((k * (k - 1) // 2).sum())


def simplicial_count(y, data) -> int:
    """Number of closed (d+1)-vertex sample simplices that contain ``y``."""
    q, X = prepare(y, data)
    n, d = X.shape
    if n < d + 1:
        raise DataError(f"simplicial depth needs n >= d+1 = {d + 1} points, got {n}")
    if d == 1:
        x = X[:, 0]
        lo = int(np.count_nonzero(x < q[0]))
        hi = int(np.count_nonzero(x > q[0]))
        return n_choose(n, 2) - n_choose(lo, 2) - n_choose(hi, 2)
    if d == 2:
        V, z = split_coincident(q, X)
        m = V.shape[0]
        with_zero = n_choose(n, 3) - n_choose(m, 3)
        return with_zero + n_choose(m, 3) - _planar_separable_triples(V)
    return _brute_force_count(q, X)


def _brute_force_count(q, X) -> int:
    n, d = X.shape
    V = X - q
    V = V / max(np.abs(V).max(), 1e-300)
    total = 0
    for block in combination_blocks(n, d + 1, max_rows=1 << 16):
        total += int(simplices_contain(V[block]).sum())
    return total


def simplices_contain(S: np.ndarray) -> np.ndarray:
    """Closed containment of the origin in each simplex of ``S`` (b, d+1, d).

    With signed cofactors ``s_k = (-1)^k det(S without row k)`` the origin
    satisfies ``sum_k s_k v_k = 0``, so it lies in a regular simplex iff
    all nonzero ``s_k`` share a sign. Flat simplices go through NNLS.
    """
    b, k, d = S.shape
    s = np.empty((b, k))
    for j in range(k):
        s[:, j] = (-1.0) ** j * np.linalg.det(np.delete(S, j, axis=1))
    tot = s.sum(axis=1)
    tol = 1e-12 * np.abs(s).max(axis=1, initial=0.0) + 1e-14
    regular = np.abs(tot) > tol
    sg = np.where(np.abs(s) <= tol[:, None], 0.0, np.sign(s))
    inside = regular & ((sg >= 0).all(axis=1) | (sg <= 0).all(axis=1))
    for i in np.flatnonzero(~regular):
        inside[i] = _degenerate_contains(S[i])
    return inside


def _degenerate_contains(S: np.ndarray) -> bool:
    """Closed containment of the origin in conv(S) for a flat simplex."""
    A = np.vstack([S.T, np.ones(S.shape[0])])
    b = np.zeros(S.shape[1] + 1)
    b[-1] = 1.0
    lam, res = nnls(A, b)
    return res <= 1e-9


def simplicial_depth(y, data) -> float:
    """Simplicial depth with closed simplices.

    Planar samples use an angular count in ``O(n log n)``; the line uses a
    closed form; higher dimensions enumerate all ``C(n, d+1)`` simplices.
    """
    q, X = prepare(y, data)
    n, d = X.shape
    return simplicial_count(q, X) / n_choose(n, d + 1)


def simplicial_depth_fraction(y, data) -> Fraction:
    """Exact rational value of the simplicial depth."""
    q, X = prepare(y, data)
    n, d = X.shape
    return Fraction(simplicial_count(q, X), n_choose(n, d + 1))
