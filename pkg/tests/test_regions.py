import numpy as np
import pytest

from depthkit import Dataset
from depthkit.depth import halfspace_depth, halfspace_depth_all, onion_depth_raw
from depthkit.api import sample_depths
from depthkit.regions import (
    depth_median,
    depth_region_members,
    onion_layers,
    prob_central_region,
    spatial_median,
    tukey_region_2d,
)

SQ_C = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5]], float)
SQUARE = SQ_C[:4]


def polygon_contains(poly, z, tol=1e-9):
    """Closed containment in a CCW convex polygon (a point or a segment allowed)."""
    m = poly.shape[0]
    if m == 0:
        return False
    if m == 1:
        return np.linalg.norm(z - poly[0]) <= tol
    if m == 2:
        a, b = poly
        t = np.clip(np.dot(z - a, b - a) / np.dot(b - a, b - a), 0, 1)
        return np.linalg.norm(a + t * (b - a) - z) <= tol
    for i in range(m):
        a, b = poly[i], poly[(i + 1) % m]
        cross = (b[0] - a[0]) * (z[1] - a[1]) - (b[1] - a[1]) * (z[0] - a[0])
        if cross < -tol:
            return False
    return True


def test_square_center_member_region():
    r = depth_region_members(SQ_C, "halfspace", 0.4)
    assert r.members.tolist() == [4]
    assert depth_region_members(SQ_C, "halfspace", 1e-9).members.tolist() == [0, 1, 2, 3, 4]


def test_prob_region_ties_inclusive():
    r = prob_central_region(SQ_C, "halfspace", 0.5)
    assert r.members.tolist() == [0, 1, 2, 3, 4]
    assert r.alpha == pytest.approx(0.2)
    assert r.info["ties_inclusive"]
    assert prob_central_region(SQ_C, "halfspace", 1 / 5).members.tolist() == [4]
    assert prob_central_region(SQ_C, "halfspace", 1.0).members.size == 5


def test_member_regions_nested_and_exact():
    X = np.random.default_rng(0).standard_normal((40, 2))
    D = sample_depths(X, "halfspace")
    prev = None
    for a in np.linspace(0.025, 0.5, 20):
        r = depth_region_members(X, "halfspace", a)
        assert set(r.members) == set(np.flatnonzero(D >= a - 1e-12))
        if prev is not None:
            assert set(r.members) <= prev
        prev = set(r.members)


def test_ids_follow_dataset():
    ds = Dataset(SQ_C, ids=("a", "b", "c", "d", "mid"))
    assert depth_region_members(ds, "halfspace", 0.4).ids == ("mid",)


def test_tukey_region_hull_at_min_level():
    X = np.random.default_rng(1).standard_normal((15, 2))
    r = tukey_region_2d(X, 1 / 15)
    from scipy.spatial import ConvexHull
    assert r.vertices.shape[0] == len(ConvexHull(X).vertices)
    assert abs(ConvexHull(r.vertices).volume - ConvexHull(X).volume) < 1e-12


def test_tukey_region_square_degenerates_to_point():
    r = tukey_region_2d(SQUARE, 0.5)
    assert r.vertices.shape[0] == 1
    assert np.allclose(r.vertices[0], [0.5, 0.5])
    assert tukey_region_2d(SQUARE, 0.75).is_empty


def test_tukey_region_ccw():
    X = np.random.default_rng(2).standard_normal((30, 2))
    v = tukey_region_2d(X, 0.2).vertices
    area = 0.5 * np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1])
    assert area > 0


@pytest.mark.parametrize("seed", range(10))
def test_tukey_region_matches_point_depth_on_grid(seed):
    gen = np.random.default_rng(100 + seed)
    X = gen.standard_normal((20, 2))
    g = np.linspace(-2.5, 2.5, 20) + 0.013
    grid = np.array([[a, b] for a in g for b in g])
    for alpha in (0.1, 0.2, 0.3):
        poly = tukey_region_2d(X, alpha).vertices
        for z in grid:
            assert polygon_contains(poly, z) == (halfspace_depth(z, X) >= alpha - 1e-12)


def test_tukey_regions_nested():
    X = np.random.default_rng(3).standard_normal((25, 2))
    polys = [tukey_region_2d(X, a).vertices for a in (0.04, 0.12, 0.2, 0.28, 0.36)]
    for outer, inner in zip(polys, polys[1:]):
        assert all(polygon_contains(outer, v, tol=1e-9) for v in inner)


def test_tukey_region_rejects_3d():
    with pytest.raises(Exception):
        tukey_region_2d(np.zeros((5, 3)), 0.2)


def test_onion_layers():
    assert [r.members.tolist() for r in onion_layers(SQ_C)] == [[0, 1, 2, 3], [4]]
    circle = np.column_stack([np.cos(np.arange(7)), np.sin(np.arange(7))])
    assert len(onion_layers(circle)) == 1
    X = np.random.default_rng(4).standard_normal((60, 2))
    layers = onion_layers(X)
    assert len(layers) <= int(np.ceil(60 / 3)) + 1
    allm = np.concatenate([r.members for r in layers])
    assert sorted(allm.tolist()) == list(range(60))
    for r in layers:
        for i in r.members:
            assert onion_depth_raw(X[i], X)[0] == r.info["layer"]


def test_depth_medians():
    m = depth_median(SQ_C, "halfspace")
    assert np.allclose(m.point, [0.5, 0.5]) and m.value == pytest.approx(0.6)
    X = np.random.default_rng(5).standard_normal((12, 3))
    z = depth_median(X, "zonoid")
    assert np.allclose(z.point, X.mean(axis=0)) and z.value == 1.0
    sym = np.vstack([X, -X, np.zeros((1, 3))])
    for notion in ("halfspace", "simplicial", "spatial", "lp", "mahalanobis"):
        med = depth_median(sym, notion)
        if notion != "mahalanobis":
            assert 24 in med.indices
    D = sample_depths(X, "simplicial")
    assert depth_median(X, "simplicial").value >= D.max() - 1e-15


def test_spatial_median_examples():
    assert spatial_median(np.array([[0.0], [1.0], [10.0]])).point[0] == pytest.approx(1.0, abs=1e-9)
    tri = np.array([[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]])
    assert np.allclose(spatial_median(tri).point, tri.mean(axis=0), atol=1e-8)


def test_spatial_median_lands_on_data_point():
    # a heavy point: three copies at the origin dominate
    X = np.array([[0, 0], [0, 0], [0, 0], [1, 0], [0, 1]], float)
    res = spatial_median(X)
    assert res.converged and np.allclose(res.point, 0, atol=1e-9)


def test_spatial_median_grid_search_and_monotone():
    X = np.random.default_rng(6).standard_normal((15, 2))
    res = spatial_median(X)
    assert all(b <= a + 1e-12 for a, b in zip(res.history, res.history[1:]))
    # coarse then fine grid around the best cell
    f = lambda P: np.linalg.norm(X[None] - P[:, None], axis=2).mean(axis=1)
    c = X.mean(axis=0)
    for step in (0.1, 0.01, 0.001):
        g = np.arange(-20, 21) * step
        P = np.array([[c[0] + a, c[1] + b] for a in g for b in g])
        c = P[np.argmin(f(P))]
    assert np.linalg.norm(res.point - c) <= 1e-3
    assert res.objective <= f(c[None])[0] + 1e-12
