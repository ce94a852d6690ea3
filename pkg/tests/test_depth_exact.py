from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from depthkit.depth import (
    beta_skeleton_count,
    beta_skeleton_depth,
    halfspace_count,
    halfspace_depth,
    halfspace_depth_all,
    lens_depth_ordinal,
    lp_depth,
    mahalanobis_depth,
    oja_depth,
    oja_mean_volume,
    onion_depth,
    onion_depth_raw,
    peel,
    projection_property_bound,
    restricted_depth,
    simplicial_count,
    simplicial_depth,
    simplicial_depth_fraction,
    spatial_depth,
    zonoid_depth,
    zonoid_depth_1d,
)
from depthkit.errors import DataError
from depthkit.numerics import uniform_sphere_directions
from depthkit.scatter import moment_scatter

import oracles

SQUARE = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)


# ---------------------------------------------------------------- Mahalanobis, L_p, spatial

def test_mahalanobis_examples():
    X = np.random.default_rng(0).standard_normal((20, 3))
    assert mahalanobis_depth(X.mean(axis=0), X) == 1.0
    assert mahalanobis_depth([3.0], [[0.0], [2.0]]) == pytest.approx(0.2, abs=1e-15)
    m = moment_scatter(X)
    y = m.location + np.linalg.cholesky(m.scatter) @ np.array([1.0, 0, 0])
    assert mahalanobis_depth(y, model=m) == pytest.approx(0.5, abs=1e-12)


def test_lp_examples():
    assert lp_depth([1.0, 2.0], [[1.0, 2.0]]) == 1.0
    assert lp_depth([1.0, 0.0], [[0, 0], [2, 0]], p=2) == 0.5
    X = np.random.default_rng(1).standard_normal((15, 2))
    y = np.array([0.3, -0.2])
    for p in (1.0, 2.0, 3.5):
        assert lp_depth(y, X, p=p) == pytest.approx(oracles.lp_depth_direct(y, X, p), rel=1e-12)
    assert lp_depth(y, X, p=1) != pytest.approx(lp_depth(y, X, p=2))


def test_spatial_examples():
    assert spatial_depth([0.0], [[-1.0], [1.0]]) == 1.0
    assert spatial_depth([5.0], [[0.0]]) == 0.0
    X = np.array([[0.0, 0.0], [2.0, 0.5], [-1.0, 3.0]])
    assert spatial_depth(X[1], X) == pytest.approx(oracles.spatial_depth_direct(X[1], X), abs=1e-14)


# ---------------------------------------------------------------- halfspace

def test_halfspace_examples():
    assert halfspace_depth([2.0], [[1], [2], [3], [4], [5]]) == 2 / 5
    assert halfspace_depth([0.5, 0.5], SQUARE) == 0.5
    assert halfspace_depth([3.0, 0.5], SQUARE) == 0.0


def test_square_plus_center_depths():
    # corners: 1/5; center: the closed halfplanes through it hold the center
    # and at least two corners, so 3/5
    X = np.vstack([SQUARE, [0.5, 0.5]])
    assert halfspace_depth_all(X).tolist() == [0.2, 0.2, 0.2, 0.2, 0.6]


@settings(max_examples=120)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(1, 22), st.booleans())
def test_halfspace_matches_hyperplane_enumeration(seed, d, n, on_point):
    gen = np.random.default_rng(seed)
    X = gen.standard_normal((n, d))
    y = X[0].copy() if on_point else 0.7 * gen.standard_normal(d)
    assert halfspace_count(y, X) == oracles.halfspace_count_general_position(y, X)


@settings(max_examples=150)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(1, 14))
def test_halfspace_methods_agree_on_degenerate_lattice_data(seed, d, n):
    gen = np.random.default_rng(seed)
    X = gen.integers(-2, 3, size=(n, d)).astype(float)
    y = gen.integers(-1, 2, size=d).astype(float)
    assert halfspace_count(y, X, method="recursive") == halfspace_count(y, X, method="enumerate")


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_halfspace_degenerate_upper_bounded_by_directions(seed, d):
    """On lattice data no direction may find a closed halfspace with fewer points."""
    gen = np.random.default_rng(seed)
    X = gen.integers(-2, 3, size=(12, d)).astype(float)
    y = gen.integers(-1, 2, size=d).astype(float)
    c = halfspace_count(y, X)
    U = uniform_sphere_directions(seed, d, 3000)
    proj = (X - y) @ U.T
    assert c <= np.count_nonzero(proj >= 0, axis=0).min()


def test_halfspace_all_matches_pointwise():
    X = np.random.default_rng(3).standard_normal((25, 3))
    full = halfspace_depth_all(X)
    loo = halfspace_depth_all(X, leave_one_out=True)
    for i in range(25):
        assert full[i] == halfspace_depth(X[i], X)
        assert loo[i] == halfspace_count(X[i], np.delete(X, i, axis=0)) / 24


# ---------------------------------------------------------------- simplicial

def test_simplicial_examples():
    tri = [[0, 0], [4, 0], [0, 4]]
    assert simplicial_depth([1, 1], tri) == 1.0
    assert simplicial_depth([0.5, 0.25], SQUARE) == 0.5
    assert simplicial_depth([2, 2], SQUARE) == 0.0
    assert simplicial_depth_fraction([0.5, 0.25], SQUARE) == Fraction(1, 2)
    with pytest.raises(DataError):
        simplicial_depth([0, 0], [[0, 0], [1, 1]])


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(4, 12))
def test_simplicial_matches_rational_enumeration(seed, d, n):
    gen = np.random.default_rng(seed)
    X = gen.integers(-1000, 1001, size=(n, d))
    y = gen.integers(-400, 401, size=d) if seed % 3 else X[seed % n]
    ref = oracles.simplicial_count_rational(y, X)
    if ref is None:
        return
    assert simplicial_count(y.astype(float), X.astype(float)) == ref


def test_simplicial_boundary_points_count_as_inside():
    # y on the shared diagonal of the unit square lies in all four triangles
    assert simplicial_count([0.5, 0.5], SQUARE) == 4
    assert simplicial_count([0.0, 0.0], SQUARE) == 3


# ---------------------------------------------------------------- Oja

def test_oja_examples():
    assert oja_depth([1.0], [[0.0], [2.0]]) == 0.5
    line = np.array([[0, 0], [1, 1], [2, 2], [3, 3]], float)
    assert oja_depth([1.5, 1.5], line) == 1.0
    gen = np.random.default_rng(8)
    X = gen.standard_normal((12, 2))
    y = gen.standard_normal(2)
    A = np.array([[2.0, 0.0], [0.0, 2.0]])  # det 4
    b = np.array([0.3, -1.0])
    assert oja_depth(y, X) != pytest.approx(oja_depth(A @ y + b, X @ A.T + b))
    u = oja_depth(y, X, model=moment_scatter(X))
    v = oja_depth(A @ y + b, X @ A.T + b, model=moment_scatter(X @ A.T + b))
    assert u == pytest.approx(v, rel=1e-9)


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(3, 10))
def test_oja_matches_rational_volumes(seed, d, n):
    gen = np.random.default_rng(seed)
    X = gen.integers(-50, 51, size=(n, d))
    y = gen.integers(-20, 21, size=d)
    ref = oracles.oja_mean_volume_rational(y, X)
    got = oja_mean_volume(y.astype(float), X.astype(float))
    assert abs(Fraction(got) - ref) <= Fraction(1, 10**9) * max(1, ref)


# ---------------------------------------------------------------- zonoid

def test_zonoid_examples():
    X = np.random.default_rng(2).standard_normal((15, 3))
    assert zonoid_depth(X.mean(axis=0), X) == pytest.approx(1.0, abs=1e-12)
    assert zonoid_depth([0.75], [[0], [1], [2], [3]]) == pytest.approx(0.6, abs=1e-9)
    assert zonoid_depth_1d(0.75, [0, 1, 2, 3]) == pytest.approx(0.6, abs=1e-9)
    assert zonoid_depth([5.0, 5.0], SQUARE) == 0.0


@settings(max_examples=80)
@given(st.integers(0, 2**32 - 1), st.integers(1, 12))
def test_zonoid_1d_matches_bisection(seed, n):
    gen = np.random.default_rng(seed)
    x = gen.standard_normal(n)
    t = float(gen.uniform(x.min() - 0.2, x.max() + 0.2))
    ref = oracles.zonoid_depth_1d_bisection(t, x)
    assert zonoid_depth([t], x[:, None]) == pytest.approx(ref, abs=1e-9)
    assert zonoid_depth_1d(t, x) == pytest.approx(ref, abs=1e-9)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.integers(5, 25))
def test_zonoid_matches_highs(seed, d, n):
    gen = np.random.default_rng(seed)
    X = gen.standard_normal((n, d))
    y = 0.4 * gen.standard_normal(d)
    assert zonoid_depth(y, X) == pytest.approx(oracles.zonoid_depth_lp(y, X), abs=1e-9)


# ---------------------------------------------------------------- skeleton and lens

def test_skeleton_examples():
    X = [[0.0], [1.0]]
    assert beta_skeleton_depth([0.5], X, beta=2) == 1.0
    assert beta_skeleton_depth([0.0], X, beta=2) == 0.0
    assert beta_skeleton_depth([0.5], X, beta=1) == 1.0
    assert beta_skeleton_depth([0.0], X, beta=2, strict=False) == 1.0
    with pytest.raises(DataError):
        beta_skeleton_depth([0.0], [[1.0]])


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(2, 15),
       st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_skeleton_matches_rational_enumeration(seed, d, n, beta):
    gen = np.random.default_rng(seed)
    X = gen.integers(-20, 21, size=(n, d))
    y = gen.integers(-10, 11, size=d)
    ref = oracles.skeleton_count_rational(y, X, Fraction(beta))
    assert beta_skeleton_count(y.astype(float), X.astype(float), beta) == ref


def test_lens_ordinal_examples():
    gen = np.random.default_rng(5)
    X = gen.standard_normal((12, 2))
    D = np.linalg.norm(X[:, None] - X[None], axis=2)
    for i in range(12):
        others = np.delete(np.arange(12), i)
        ref = beta_skeleton_depth(X[i], X[others], beta=2)
        row = D[i, others]
        sub = D[np.ix_(others, others)]
        assert lens_depth_ordinal(row, sub) == pytest.approx(ref, abs=1e-15)
        assert lens_depth_ordinal(row ** 2, sub ** 2) == lens_depth_ordinal(row, sub)
    # two sample points and a query closer to both than they are to each other
    assert lens_depth_ordinal([1.0, 1.0], [[0.0, 3.0], [3.0, 0.0]]) == 1.0


def test_lens_needs_dissimilarity():
    with pytest.raises(DataError):
        lens_depth_ordinal(0, None)


# ---------------------------------------------------------------- onion

def test_onion_examples():
    X = np.vstack([SQUARE, [0.5, 0.5]])
    assert onion_depth_raw([5.0, 5.0], X) == (0, 2)
    assert onion_depth_raw([0.5, 0.5], X) == (2, 2)
    assert onion_depth([0.5, 0.5], X) == 1.0
    assert onion_depth_raw([0.0, 0.0], X) == (1, 2)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_onion_layers_match_lp_peeling(d):
    gen = np.random.default_rng(10 + d)
    X = gen.standard_normal((25 if d < 4 else 18, d))
    p = peel(X)
    assert np.array_equal(p.layer_of_points(), oracles.onion_layers_lp(X))
    for i in range(X.shape[0]):
        raw, L = onion_depth_raw(X[i], X, p)
        assert raw == p.layer_of_points()[i] and L == p.n_layers


# ---------------------------------------------------------------- projection property

def test_projection_bound_examples():
    axes = np.eye(2)
    assert projection_property_bound([0.5, 0.5], SQUARE, "halfspace", axes) == 0.5
    with pytest.raises(ValueError):
        projection_property_bound([0.5, 0.5], SQUARE, "halfspace", np.empty((0, 2)))


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["halfspace", "mahalanobis", "zonoid"]))
def test_projection_bound_dominates_exact(seed, notion):
    gen = np.random.default_rng(seed)
    X = gen.standard_normal((15, 2))
    y = 0.5 * gen.standard_normal(2)
    U = uniform_sphere_directions(seed, 2, 50)
    exact = {"halfspace": halfspace_depth, "mahalanobis": mahalanobis_depth, "zonoid": zonoid_depth}[notion]
    assert projection_property_bound(y, X, notion, U) >= exact(y, X) - 1e-12


def test_missing_query_coordinate_gives_upper_bound():
    gen = np.random.default_rng(6)
    X = gen.standard_normal((30, 3))
    for _ in range(20):
        y = 0.8 * gen.standard_normal(3)
        full = halfspace_depth(y, X)
        masked = y.copy()
        masked[gen.integers(3)] = np.nan
        assert restricted_depth(masked, X, halfspace_depth) >= full
        assert projection_property_bound(masked, X, "halfspace", uniform_sphere_directions(1, 3, 200)) >= full


# ---------------------------------------------------------------- ranges

@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_values_in_unit_interval_and_on_grid(seed):
    gen = np.random.default_rng(seed)
    X = gen.standard_normal((10, 2))
    y = gen.standard_normal(2)
    vals = [mahalanobis_depth(y, X), lp_depth(y, X), halfspace_depth(y, X), simplicial_depth(y, X),
            oja_depth(y, X), zonoid_depth(y, X), spatial_depth(y, X), beta_skeleton_depth(y, X),
            onion_depth(y, X)]
    assert all(0.0 <= v <= 1.0 for v in vals)
    assert (halfspace_depth(y, X) * 10).is_integer()
    assert (simplicial_depth(y, X) * 120) == pytest.approx(round(simplicial_depth(y, X) * 120), abs=1e-9)
