"""Convex-geometry primitives: planar hulls and hull membership."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp import LpProblem, lp_solve, OPTIMAL, INFEASIBLE

INTERIOR = "interior"
BOUNDARY = "boundary"
OUTSIDE = "outside"

# absolute fallback when all points coincide
_ABS_TOL = 1e-12


def diameter_scale(points: np.ndarray) -> float:
    """Bounding-box diagonal, used to make geometric tolerances relative."""
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        return 0.0
    span = points.max(axis=0) - points.min(axis=0)
    return float(np.linalg.norm(span))


def cross2(o, a, b):
    return (a[..., 0] - o[..., 0]) * (b[..., 1] - o[..., 1]) - (a[..., 1] - o[..., 1]) * (b[..., 0] - o[..., 0])


@dataclass(frozen=True)
class Hull2D:
    """Result of :func:`convex_hull_2d`.

    ``vertices`` are point indices in counterclockwise order. ``boundary``
    holds indices of points that lie on the hull but are not listed as
    vertices (collinear edge points and duplicates of vertices).
    """

    vertices: np.ndarray
    boundary: np.ndarray
    n_points: int

    @property
    def interior(self) -> np.ndarray:
        mask = np.ones(self.n_points, dtype=bool)
        mask[self.vertices] = False
        mask[self.boundary] = False
        return np.flatnonzero(mask)

    @property
    def on_hull(self) -> np.ndarray:
        return np.sort(np.concatenate([self.vertices, self.boundary]))


def convex_hull_2d(points, tol: float = 1e-12) -> Hull2D:
    """Counterclockwise convex hull of planar points (Andrew's monotone chain).

    Collinear points on hull edges are excluded from the vertex list and
    reported in ``boundary``. Degenerate inputs give a one-vertex (point) or
    two-vertex (segment) hull.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("convex_hull_2d expects an (n, 2) array")
    n = pts.shape[0]
    if n == 0:
        raise ValueError("empty point set")
    scale = diameter_scale(pts)
    eps = tol * scale * scale if scale > 0 else 0.0
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    # unique locations, keep first index of each
    sp = pts[order]
    keep = np.ones(n, dtype=bool)
    keep[1:] = np.any(sp[1:] != sp[:-1], axis=1)
    uniq = order[keep]
    if uniq.size == 1:
        vertices = uniq
    else:
        xs = pts[:, 0].tolist()
        ys = pts[:, 1].tolist()

        def half(seq):
            chain = []
            for idx in seq:
                px, py = xs[idx], ys[idx]
                while len(chain) >= 2:
                    a, b = chain[-2], chain[-1]
                    cr = (xs[b] - xs[a]) * (py - ys[a]) - (ys[b] - ys[a]) * (px - xs[a])
                    if cr > eps:
                        break
                    chain.pop()
                chain.append(idx)
            return chain

        cand = uniq[~_strictly_inside_octagon(pts[uniq], eps)]
        lower = half(cand.tolist())
        upper = half(cand[::-1].tolist())
        vertices = np.array(lower[:-1] + upper[:-1], dtype=int)
        if vertices.size == 2 and vertices[0] == vertices[1]:
            vertices = vertices[:1]
    vertices = np.asarray(vertices, dtype=int)
    boundary = _points_on_polygon_boundary(pts, vertices, scale, tol)
    return Hull2D(vertices=vertices, boundary=boundary, n_points=n)


def _strictly_inside_octagon(P, eps):
    """Points strictly inside the polygon of the eight extreme points.

    Such points cannot be hull vertices or lie on the hull, so the chain
    construction can skip them (Akl-Toussaint filter).
    """
    if P.shape[0] < 16:
        return np.zeros(P.shape[0], dtype=bool)
    keys = [P[:, 0], P[:, 0] + P[:, 1], P[:, 1], P[:, 1] - P[:, 0],
            -P[:, 0], -P[:, 0] - P[:, 1], -P[:, 1], P[:, 0] - P[:, 1]]
    ext = [int(np.argmax(k)) for k in keys]  # counterclockwise by direction
    poly = []
    for e in ext:
        if not poly or poly[-1] != e:
            poly.append(e)
    if len(poly) > 1 and poly[0] == poly[-1]:
        poly.pop()
    if len(poly) < 3:
        return np.zeros(P.shape[0], dtype=bool)
    V = P[poly]
    inside = np.ones(P.shape[0], dtype=bool)
    for i in range(len(poly)):
        a, b = V[i], V[(i + 1) % len(poly)]
        cr = (b[0] - a[0]) * (P[:, 1] - a[1]) - (b[1] - a[1]) * (P[:, 0] - a[0])
        inside &= cr > eps
    return inside


def _points_on_polygon_boundary(pts, vertices, scale, tol):
    n = pts.shape[0]
    is_vertex = np.zeros(n, dtype=bool)
    is_vertex[vertices] = True
    rest = np.flatnonzero(~is_vertex)
    if rest.size == 0:
        return np.empty(0, dtype=int)
    q = pts[rest]
    dist_tol = max(tol * scale, _ABS_TOL) if scale > 0 else _ABS_TOL
    on = np.zeros(rest.size, dtype=bool)
    V = pts[vertices]
    m = V.shape[0]
    if m == 1:
        on = np.linalg.norm(q - V[0], axis=1) <= dist_tol
    else:
        k = m if m > 2 else 1
        A = V[:k]
        AB = V[(np.arange(k) + 1) % m] - A                   # (k, 2)
        L2 = np.einsum("ij,ij->i", AB, AB)
        rel = q[:, None, :] - A[None, :, :]                  # (r, k, 2)
        t = np.clip(np.einsum("rkj,kj->rk", rel, AB) / L2, 0.0, 1.0)
        gap = rel - t[..., None] * AB[None, :, :]
        on = (np.einsum("rkj,rkj->rk", gap, gap) <= dist_tol * dist_tol).any(axis=1)
    return rest[on]


def point_in_polygon(q, vertices_xy, tol: float = 1e-9) -> np.ndarray:
    """Closed membership of points ``q`` in a convex CCW polygon.

    Degenerate polygons (a point or a segment) are handled; ``tol`` is
    relative to the polygon's diameter.
    """
    q = np.atleast_2d(np.asarray(q, dtype=float))
    V = np.asarray(vertices_xy, dtype=float)
    if V.shape[0] == 0:
        return np.zeros(q.shape[0], dtype=bool)
    scale = max(diameter_scale(V), diameter_scale(q) * 1e-3, _ABS_TOL)
    dist_tol = tol * scale
    if V.shape[0] == 1:
        return np.linalg.norm(q - V[0], axis=1) <= dist_tol
    if V.shape[0] == 2:
        a, b = V
        ab = b - a
        t = np.clip(((q - a) @ ab) / (ab @ ab), 0.0, 1.0)
        return np.linalg.norm(q - (a + t[:, None] * ab), axis=1) <= dist_tol
    inside = np.ones(q.shape[0], dtype=bool)
    m = V.shape[0]
    for i in range(m):
        a = V[i]
        b = V[(i + 1) % m]
        ab = b - a
        L = np.linalg.norm(ab)
        if L == 0:
            continue
        signed = ((ab[0]) * (q[:, 1] - a[1]) - (ab[1]) * (q[:, 0] - a[0])) / L
        inside &= signed >= -dist_tol
    return inside


def affine_rank(points: np.ndarray, tol: float = 1e-10) -> int:
    pts = np.asarray(points, dtype=float)
    if pts.shape[0] <= 1:
        return 0
    centred = pts[1:] - pts[0]
    s = np.linalg.svd(centred, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int((s > tol * s[0]).sum())


def in_convex_hull(y, S, tol: float = 1e-9) -> str:
    """Classify ``y`` as ``"interior"``, ``"boundary"`` or ``"outside"`` conv(S).

    Membership comes from an LP that maximises the smallest convex weight
    ``eps`` in ``y = sum(lam_i s_i)``; ``y`` is in the relative interior iff
    that optimum is positive. Interior additionally needs conv(S) to be
    full-dimensional. Points outside but within ``tol`` (relative to the
    data diameter) of the hull count as boundary.
    """
    S = np.atleast_2d(np.asarray(S, dtype=float))
    y = np.asarray(y, dtype=float).ravel()
    if S.shape[0] == 0:
        raise ValueError("empty point set")
    n, d = S.shape
    if y.size != d:
        raise ValueError("dimension mismatch between point and set")
    scale = diameter_scale(np.vstack([S, y]))
    if scale == 0:
        return BOUNDARY
    centre = S.mean(axis=0)
    Sn = (S - centre) / scale
    yn = (y - centre) / scale
    # variables: lam_1..lam_n, eps ; maximise eps
    A_eq = np.zeros((d + 1, n + 1))
    A_eq[:d, :n] = Sn.T
    A_eq[d, :n] = 1.0
    A_ge = np.zeros((n, n + 1))
    A_ge[:, :n] = np.eye(n)
    A_ge[:, n] = -1.0
    A = np.vstack([A_eq, A_ge])
    b = np.concatenate([yn, [1.0], np.zeros(n)])
    senses = ["="] * (d + 1) + [">="] * n
    c = np.zeros(n + 1)
    c[n] = -1.0
    lower = np.concatenate([np.zeros(n), [-1.0]])
    upper = np.concatenate([np.ones(n), [1.0 / n]])
    sol = lp_solve(LpProblem(c, A, senses, b, lower, upper))
    if sol.status == OPTIMAL:
        eps = sol.x[n]
        if eps > tol and affine_rank(S) == d:
            return INTERIOR
        return BOUNDARY
    if sol.status != INFEASIBLE:
        raise RuntimeError(f"hull membership LP ended with status {sol.status}")
    return BOUNDARY if _l1_distance_to_hull(yn, Sn) <= tol * np.sqrt(d) else OUTSIDE


def _l1_distance_to_hull(y, S):
    n, d = S.shape
    # lam (n), r_plus (d), r_minus (d)
    A = np.hstack([S.T, np.eye(d), -np.eye(d)])
    A = np.vstack([A, np.concatenate([np.ones(n), np.zeros(2 * d)])])
    b = np.concatenate([y, [1.0]])
    c = np.concatenate([np.zeros(n), np.ones(2 * d)])
    sol = lp_solve(LpProblem(c, A, ["="] * (d + 1), b))
    if sol.status != OPTIMAL:
        raise RuntimeError("distance LP failed")
    return sol.objective
