"""Zonoid depth via linear programming.

The zonoid depth of ``y`` is ``1 / (n t*)`` where ``t*`` is the smallest
possible maximum weight of a convex combination of the sample equal to
``y``. Substituting ``mu = lambda / t`` turns this into

    maximize  sum(mu) / n   s.t.  sum_i mu_i (x_i - y) = 0,  0 <= mu_i <= 1,

which has only d equality rows, box bounds, and the feasible point
``mu = 0``. Its optimum is 0 exactly when ``y`` lies outside the convex
hull and at least 1/n otherwise.
"""
from __future__ import annotations

import numpy as np

from ..dataset import Dataset, as_points
from ..errors import DataError
from ..numerics import OPTIMAL, LpProblem, lp_solve
from ._common import prepare


def zonoid_depth(y, data, return_weights: bool = False):
    """Zonoid depth of ``y``; 0 outside the convex hull of the sample."""
    q, X = prepare(y, data)
    n, d = X.shape
    V = X - q
    scale = np.abs(V).max()
    if scale == 0:
        return (1.0, np.full(n, 1.0 / n)) if return_weights else 1.0
    V = V / scale
    prob = LpProblem(c=-np.ones(n), A=V.T, senses=["="] * d, b=np.zeros(d),
                     lower=np.zeros(n), upper=np.ones(n))
    # the optimum usually keeps most weights at their cap
    sol = lp_solve(prob, start_at_upper=np.ones(n, dtype=bool))
    if sol.status != OPTIMAL:
        raise RuntimeError(f"zonoid LP ended with status {sol.status}")
    total = -sol.objective
    if total < 0.5:
        depth, lam = 0.0, None
    else:
        depth = min(total / n, 1.0)
        lam = sol.x / total
    return (depth, lam) if return_weights else depth


def zonoid_depth_1d(t: float, x) -> float:
    """Univariate zonoid depth by greedy mass allocation.

    The lower end of the zonoid alpha-region is the mean of the lowest
    ``alpha`` fraction of the sample (the weight ``1/(alpha n)`` goes to the
    smallest points first); the depth is the largest alpha whose region
    still covers ``t``.
    """
    x = np.sort(np.asarray(x, dtype=float).ravel())
    return min(_lower_reach(t, x), _lower_reach(-t, -x[::-1]))


def _lower_reach(t, x):
    n = x.size
    if t < x[0]:
        return 0.0
    csum = np.cumsum(x)
    k = np.arange(1, n + 1)
    ok = csum <= t * k
    if ok[-1]:
        return 1.0
    # largest k with mean of the k smallest <= t, then interpolate
    kk = int(np.flatnonzero(ok).max()) + 1
    s_k = csum[kk - 1]
    nxt = x[kk]
    alpha_n = (kk * nxt - s_k) / (nxt - t)
    return float(min(alpha_n / n, 1.0))


def mean_impute(data) -> np.ndarray:
    """Replace each missing entry by the mean of the observed values in its column."""
    X = np.array(as_points(data, allow_missing=True), dtype=float)
    mask = ~np.isfinite(X)
    if not mask.any():
        return X
    means = np.nanmean(np.where(mask, np.nan, X), axis=0)
    if np.any(~np.isfinite(means[mask.any(axis=0)])):
        raise DataError("a column has no observed values to impute from")
    X[mask] = np.take(means, np.nonzero(mask)[1])
    return X


def zonoid_depth_imputed(y, data) -> float:
    """Zonoid depth after mean imputation of the missing sample entries."""
    if isinstance(data, Dataset):
        data = data.points
    return zonoid_depth(y, mean_impute(data))
