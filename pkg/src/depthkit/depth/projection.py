"""Upper bounds from the projection property.

Halfspace, Mahalanobis and zonoid depth equal the infimum of the
univariate depths of the projections ``<p, y>`` over all directions ``p``.
Any finite set of directions therefore gives an upper bound, and so does
dropping coordinates, which is how a query with missing coordinates is
handled.
"""
from __future__ import annotations

import numpy as np

from ..dataset import as_points
from ..errors import DataError
from .zonoid import zonoid_depth_1d

PROJECTION_NOTIONS = ("halfspace", "mahalanobis", "zonoid")


def univariate_depth(t: float, x, notion: str) -> float:
    """Depth of the number ``t`` w.r.t. the one-dimensional sample ``x``."""
    x = np.asarray(x, dtype=float).ravel()
    n = x.size
    if notion == "halfspace":
        return min(np.count_nonzero(x <= t), np.count_nonzero(x >= t)) / n
    if notion == "mahalanobis":
        mu = x.mean()
        var = np.mean((x - mu) ** 2)
        if var == 0:
            return 1.0 if t == mu else 0.0
        return float(1.0 / (1.0 + (t - mu) ** 2 / var))
    if notion == "zonoid":
        return zonoid_depth_1d(t, x)
    raise ValueError(f"notion {notion!r} lacks the projection property; use one of {PROJECTION_NOTIONS}")


def projection_property_bound(y, data, notion: str, directions) -> float:
    """Minimum over ``directions`` of the univariate depth of the projected query.

    Missing coordinates of ``y`` (NaN) restrict everything to the observed
    coordinates; directions are cut to that subspace and renormalized.
    """
    if notion not in PROJECTION_NOTIONS:
        raise ValueError(f"notion {notion!r} lacks the projection property; use one of {PROJECTION_NOTIONS}")
    X = as_points(data)
    q = np.asarray(y, dtype=float).ravel()
    if q.size != X.shape[1]:
        raise DataError(f"query has dimension {q.size}, sample has dimension {X.shape[1]}")
    P = np.atleast_2d(np.asarray(directions, dtype=float))
    if P.size == 0:
        raise ValueError("empty direction set")
    if P.shape[1] != X.shape[1]:
        raise DataError("directions do not match the sample dimension")
    obs = np.isfinite(q)
    if not obs.any():
        raise DataError("query has no observed coordinates")
    P = P[:, obs]
    norms = np.linalg.norm(P, axis=1)
    keep = norms > 0
    if not keep.any():
        raise ValueError("no direction has a component in the observed coordinates")
    P = P[keep] / norms[keep, None]
    proj = X[:, obs] @ P.T
    t = P @ q[obs]
    return float(min(univariate_depth(t[k], proj[:, k], notion) for k in range(P.shape[0])))


def restricted_depth(y, data, depth_fn, **kw) -> float:
    """Depth of the observed part of ``y`` w.r.t. the sample cut to those coordinates.

    For notions with the projection property this bounds the full depth
    from above.
    """
    X = as_points(data)
    q = np.asarray(y, dtype=float).ravel()
    obs = np.isfinite(q)
    if not obs.any():
        raise DataError("query has no observed coordinates")
    return depth_fn(q[obs], X[:, obs], **kw)
