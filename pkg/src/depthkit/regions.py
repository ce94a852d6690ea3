"""Central regions, onion layers and depth medians."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .api import sample_depths
from .dataset import Dataset, as_points
from .depth.onion import peel
from .errors import DataError
from .numerics import convex_hull_2d, diameter_scale

_EPS = 1e-12


@dataclass(frozen=True, eq=False)
class Region:
    """A central region: a planar polygon or a set of sample indices.

    ``vertices`` is a counterclockwise (m, 2) array for ``polygon2d``
    regions; a single row is a point region and an empty array means the
    region is empty. ``members`` lists sample indices for ``member_set``
    regions.
    """

    kind: str
    alpha: float
    notion: str
    vertices: np.ndarray | None = None
    members: np.ndarray | None = None
    ids: tuple | None = None
    info: dict = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        if self.kind == "polygon2d":
            return self.vertices is None or self.vertices.shape[0] == 0
        return self.members is None or self.members.size == 0


def _ids_for(data, members):
    if isinstance(data, Dataset) and data.ids:
        return tuple(data.ids[i] for i in members)
    return tuple(int(i) for i in members)


def depth_region_members(data, notion: str = "halfspace", alpha: float = 0.5,
                         method: str = "exact", depths=None, **params) -> Region:
    """Sample points with depth at least ``alpha``."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    D = sample_depths(data, notion, method, **params) if depths is None else np.asarray(depths)
    members = np.flatnonzero(D >= alpha - _EPS)
    return Region("member_set", float(alpha), notion, members=members, ids=_ids_for(data, members))


def prob_central_region(data, notion: str = "halfspace", beta: float = 0.5,
                        method: str = "exact", depths=None, *, skeleton_beta: float = 2.0,
                        **params) -> Region:
    """Smallest depth level set holding at least ``ceil(beta n)`` sample points.

    ``beta`` is the probability content; the beta parameter of the skeleton
    depth goes in ``skeleton_beta``.

    Sample depths are sorted in decreasing order and cut at the
    ``ceil(beta n)``-th value; every point tied with the cut is included.
    The achieved level is stored as ``alpha``.
    """
    if not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1]")
    if depths is None:
        D = sample_depths(data, notion, method, beta=skeleton_beta, **params)
    else:
        D = np.asarray(depths)
    n = D.size
    m = max(1, math.ceil(beta * n - 1e-9))
    cut = float(np.sort(D)[::-1][m - 1])
    members = np.flatnonzero(D >= cut - _EPS)
    return Region("member_set", cut, notion, members=members, ids=_ids_for(data, members),
                  info={"beta": beta, "target_count": m, "ties_inclusive": True})


def _clip(poly: np.ndarray, u: np.ndarray, c: float, tol: float) -> np.ndarray:
    """Sutherland-Hodgman clip of a convex polygon by ``<u, z> <= c``."""
    if poly.shape[0] == 0:
        return poly
    s = poly @ u - c
    inside = s <= tol
    if inside.all():
        return poly
    if not inside.any():
        return poly[:0]
    out = []
    m = poly.shape[0]
    for i in range(m):
        a, b = poly[i], poly[(i + 1) % m]
        sa, sb = s[i], s[(i + 1) % m]
        if sa <= tol:
            out.append(a)
        if (sa <= tol) != (sb <= tol) and sa != sb:
            t = sa / (sa - sb)
            out.append(a + t * (b - a))
    return np.array(out) if out else poly[:0]


def _dedupe(poly: np.ndarray, tol: float) -> np.ndarray:
    if poly.shape[0] <= 1:
        return poly
    keep = [poly[0]]
    for p in poly[1:]:
        if np.linalg.norm(p - keep[-1]) > tol:
            keep.append(p)
    if len(keep) > 1 and np.linalg.norm(keep[0] - keep[-1]) <= tol:
        keep.pop()
    return np.array(keep)


def tukey_region_2d(data, alpha: float, tol: float = 1e-10) -> Region:
    """Exact bivariate halfspace-depth region ``{z : D(z) >= alpha}``.

    With ``k = ceil(alpha n)`` the region is the intersection of the
    half-planes ``<u, z> <= q_u`` where ``q_u`` is the k-th largest
    projection of the sample on ``u``. The k-th largest projection changes
    its defining point only where two projections swap, so it suffices to
    take ``u`` normal to the line through each pair of sample points, in
    both orientations.
    """
    X = as_points(data)
    n, d = X.shape
    if d != 2:
        raise DataError("tukey_region_2d needs bivariate data")
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    k = max(1, math.ceil(alpha * n - 1e-9))
    scale = max(diameter_scale(X), 1e-300)
    atol = tol * scale
    hull = convex_hull_2d(X)
    poly = X[hull.vertices]
    if k > n:
        poly = poly[:0]
    else:
        i, j = np.triu_indices(n, k=1)
        diff = X[j] - X[i]
        nz = np.linalg.norm(diff, axis=1) > atol
        normals = np.column_stack([-diff[nz, 1], diff[nz, 0]])
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        normals = np.vstack([normals, -normals])
        for s in range(0, normals.shape[0], 4096):
            U = normals[s:s + 4096]
            P = X @ U.T                                   # (n, b)
            q = -np.partition(-P, k - 1, axis=0)[k - 1]   # k-th largest
            if poly.shape[0] == 0:
                break
            # only half-planes that cut the current polygon need clipping
            cuts = np.flatnonzero((poly @ U.T - q > atol).any(axis=0))
            for c in cuts:
                poly = _clip(poly, U[c], q[c], atol)
                if poly.shape[0] == 0:
                    break
            poly = _dedupe(poly, atol)
    if poly.shape[0] >= 3:
        h = convex_hull_2d(poly, tol=1e-14)
        poly = poly[h.vertices]
    info = {"k": k, "empty": poly.shape[0] == 0}
    return Region("polygon2d", float(alpha), "halfspace", vertices=np.asarray(poly, dtype=float), info=info)


def onion_layers(data) -> list[Region]:
    """Convex layers of the sample, outermost first."""
    X = as_points(data)
    peeling = peel(X)
    out = []
    for j, layer in enumerate(peeling.layers, start=1):
        members = np.sort(layer.members)
        out.append(Region("member_set", j / peeling.n_layers, "onion", members=members,
                          ids=_ids_for(data, members), info={"layer": j}))
    return out


@dataclass(frozen=True, eq=False)
class MedianResult:
    point: np.ndarray
    value: float
    indices: np.ndarray            # all sample indices attaining the maximum (may be empty)
    notion: str
    method: str


def depth_median(data, notion: str = "halfspace", method: str = "exact", **params) -> MedianResult:
    """Deepest point: the mean for Mahalanobis and zonoid depth, else the deepest sample point.

    Ties are all listed in ``indices``; the first one is the representative.
    """
    X = as_points(data)
    if notion in ("mahalanobis", "zonoid") and params.get("whiten") in (None, "cov", "none"):
        mu = X.mean(axis=0)
        return MedianResult(mu, 1.0, np.empty(0, dtype=int), notion, method)
    D = sample_depths(data, notion, method, **params)
    best = D.max()
    idx = np.flatnonzero(D >= best - _EPS)
    return MedianResult(X[idx[0]].copy(), float(best), idx, notion, method)


@dataclass(frozen=True, eq=False)
class SpatialMedian:
    point: np.ndarray
    converged: bool
    iterations: int
    objective: float
    history: tuple = ()


def _mean_distance(X, y):
    return float(np.linalg.norm(X - y, axis=1).mean())


def spatial_median(data, tol: float = 1e-10, max_iter: int = 1000) -> SpatialMedian:
    """Minimizer of the mean Euclidean distance (Weiszfeld iteration).

    When an iterate lands on a data point the modified step of Vardi and
    Zhang is used: the point is optimal if the pull of the remaining points
    does not exceed its multiplicity, otherwise the step moves off it along
    the descent direction. Stops when a step is shorter than ``tol`` times
    the data diameter.
    """
    X = as_points(data)
    n, d = X.shape
    scale = diameter_scale(X)
    if scale == 0:
        raise DataError("all points are identical")
    y = np.median(X, axis=0) if d == 1 else X.mean(axis=0)
    hist = [_mean_distance(X, y)]
    coincide = 1e-14 * scale
    for it in range(1, max_iter + 1):
        diff = X - y
        dist = np.linalg.norm(diff, axis=1)
        at = dist <= coincide
        eta = int(at.sum())
        w = np.zeros(n)
        w[~at] = 1.0 / dist[~at]
        if w.sum() == 0:
            break
        T = (w[:, None] * X).sum(axis=0) / w.sum()
        if eta:
            R = (w[:, None] * diff).sum(axis=0)
            r = np.linalg.norm(R)
            if r <= eta:
                return SpatialMedian(y, True, it, hist[-1], tuple(hist))
            gamma = eta / r
            y_new = (1 - gamma) * T + gamma * y
        else:
            y_new = T
        step = np.linalg.norm(y_new - y)
        y = y_new
        hist.append(_mean_distance(X, y))
        if step < tol * scale:
            return SpatialMedian(y, True, it, hist[-1], tuple(hist))
    warnings.warn("spatial_median reached max_iter before converging", RuntimeWarning)
    return SpatialMedian(y, False, max_iter, hist[-1], tuple(hist))
