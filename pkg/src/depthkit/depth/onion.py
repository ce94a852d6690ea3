"""Onion (convex hull peeling) depth.

The sample is peeled into layers: layer j holds the points of the current
remainder that are not interior to its convex hull ``C_j``. A query gets
the raw value ``#{j : y in C_j}`` with closed hulls, so a point in the
interior of the last layer's hull, or on any layer's boundary, counts that
layer. The normalized depth divides by the number of layers.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ..numerics import OUTSIDE, affine_rank, convex_hull_2d, diameter_scale, in_convex_hull, point_in_polygon
from ._common import prepare

_TOL = 1e-10


@dataclass
class Layer:
    members: np.ndarray                     # sample indices peeled at this step
    remainder: np.ndarray                   # sample indices whose hull is C_j
    polygon: np.ndarray | None = None       # CCW vertices (d = 2)
    equations: np.ndarray | None = None     # facet equations (d >= 3, full-dimensional)


@dataclass
class OnionPeeling:
    points: np.ndarray
    layers: list = field(default_factory=list)

    @property
    def n_layers(self) -> int:
        return len(self.layers)

    def layer_of_points(self) -> np.ndarray:
        """1-based layer index of every sample point."""
        out = np.zeros(self.points.shape[0], dtype=int)
        for j, layer in enumerate(self.layers, start=1):
            out[layer.members] = j
        return out

    def contains(self, j: int, y: np.ndarray) -> bool:
        """Closed membership of ``y`` in the hull of layer ``j`` (0-based)."""
        layer = self.layers[j]
        P = self.points
        scale = max(diameter_scale(P), 1e-300)
        if layer.polygon is not None:
            return bool(point_in_polygon(y, layer.polygon, tol=_TOL)[0])
        if layer.equations is not None:
            vals = layer.equations[:, :-1] @ y + layer.equations[:, -1]
            return bool(vals.max() <= _TOL * scale)
        return in_convex_hull(y, P[layer.remainder], tol=_TOL) != OUTSIDE


def peel(data, tol: float = _TOL) -> OnionPeeling:
    """Peel the sample into convex layers."""
    X = np.asarray(data, dtype=float) if not hasattr(data, "complete_points") else data.complete_points()
    if X.ndim == 1:
        X = X[:, None]
    n, d = X.shape
    scale = max(diameter_scale(X), 1e-300)
    result = OnionPeeling(points=X)
    rest = np.arange(n)
    while rest.size:
        P = X[rest]
        if d == 1:
            x = P[:, 0]
            lo, hi = x.min(), x.max()
            on = (x <= lo + tol * scale) | (x >= hi - tol * scale)
            layer = Layer(members=rest[on], remainder=rest)
            layer.equations = np.array([[-1.0, lo], [1.0, -hi]])
        elif d == 2:
            hull = convex_hull_2d(P, tol=tol)
            on = np.zeros(rest.size, dtype=bool)
            on[hull.on_hull] = True
            poly = P[hull.vertices]
            layer = Layer(members=rest[on], remainder=rest, polygon=poly)
        else:
            eq = None
            if rest.size > d and affine_rank(P) == d:
                try:
                    eq = ConvexHull(P).equations
                except QhullError:
                    eq = None
            if eq is None:
                on = np.ones(rest.size, dtype=bool)
            else:
                on = (P @ eq[:, :-1].T + eq[:, -1]).max(axis=1) >= -tol * scale
            layer = Layer(members=rest[on], remainder=rest, equations=eq)
        result.layers.append(layer)
        rest = rest[~on]
    return result


def onion_depth_raw(y, data, peeling: OnionPeeling | None = None) -> tuple[int, int]:
    """(number of closed layer hulls containing ``y``, total number of layers)."""
    q, X = prepare(y, data)
    if peeling is None:
        peeling = peel(X)
    raw = 0
    for j in range(peeling.n_layers):
        if not peeling.contains(j, q):
            break
        raw += 1
    return raw, peeling.n_layers


def onion_depth(y, data, peeling: OnionPeeling | None = None) -> float:
    """Onion depth normalized by the number of layers, in [0, 1]."""
    raw, L = onion_depth_raw(y, data, peeling)
    return raw / L
