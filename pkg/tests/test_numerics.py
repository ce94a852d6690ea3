import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from depthkit.errors import SingularScatterError
from depthkit.numerics import (
    BOUNDARY,
    INFEASIBLE,
    INTERIOR,
    OPTIMAL,
    OUTSIDE,
    LpProblem,
    RandomSource,
    cholesky_inverse,
    convex_hull_2d,
    in_convex_hull,
    inverse_sqrt,
    lp_solve,
    uniform_sphere_direction,
    uniform_sphere_directions,
)


def test_cholesky_inverse_examples():
    assert np.allclose(cholesky_inverse(np.eye(3)), np.eye(3))
    assert np.allclose(cholesky_inverse(np.diag([2.0, 2.0])), np.diag([0.5, 0.5]))
    with pytest.raises(SingularScatterError):
        cholesky_inverse(np.outer([1.0, 2.0], [1.0, 2.0]))


def test_inverse_sqrt_examples():
    assert np.allclose(inverse_sqrt(np.eye(2)), np.eye(2))
    assert np.allclose(inverse_sqrt(np.diag([4.0, 9.0])), np.diag([0.5, 1 / 3]))
    A = np.array([[1.0, 0.5], [0.5, 1.0]])
    W = inverse_sqrt(A)
    assert np.abs(W @ A @ W - np.eye(2)).max() <= 1e-8


@settings(max_examples=60)
@given(st.integers(1, 10), st.floats(0, 6), st.integers(0, 2**32 - 1))
def test_inverse_sqrt_reconstructs_identity(d, log_cond, seed):
    gen = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(gen.standard_normal((d, d)))
    w = np.logspace(0, log_cond, d)
    A = (Q * w) @ Q.T
    W = inverse_sqrt(A)
    assert np.abs(W @ A @ W - np.eye(d)).max() <= 1e-8
    assert np.abs(A @ cholesky_inverse(A) - np.eye(d)).max() <= 1e-8 * max(1.0, w.max() / w.min()) ** 0.5


def test_lp_symmetric_example():
    # variables l1, l2, t: min t s.t. l1 + l2 = 1, l_i - t <= 0
    p = LpProblem([0, 0, 1], [[1, 1, 0], [1, 0, -1], [0, 1, -1]], ["=", "<=", "<="], [1, 0, 0])
    sol = lp_solve(p)
    assert sol.status == OPTIMAL and sol.certified
    assert abs(sol.objective - 0.5) < 1e-12


def test_lp_infeasible_example():
    p = LpProblem([0.0], [[1.0], [1.0]], ["=", "<="], [2.0, 1.0])
    assert lp_solve(p).status == INFEASIBLE


def _vertex_enumeration(c, A, b):
    """Best basic feasible solution of min c x, A x <= b, x >= 0 by brute force."""
    import itertools
    m, n = A.shape
    G = np.vstack([A, -np.eye(n)])
    h = np.concatenate([b, np.zeros(n)])
    best = None
    for rows in itertools.combinations(range(m + n), n):
        M = G[list(rows)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, h[list(rows)])
        if np.all(G @ x <= h + 1e-9):
            v = c @ x
            best = v if best is None else min(best, v)
    return best


@settings(max_examples=80)
@given(st.integers(0, 2**32 - 1))
def test_lp_matches_vertex_enumeration(seed):
    gen = np.random.default_rng(seed)
    n, m = 5, 4
    A = gen.standard_normal((m, n))
    b = gen.uniform(0.5, 2.0, m)
    c = gen.standard_normal(n)
    # a bounding row keeps the problem bounded
    A = np.vstack([A, np.ones(n)])
    b = np.append(b, 10.0)
    sol = lp_solve(LpProblem(c, A, ["<="] * (m + 1), b), pivot_rule="bland")
    assert sol.status == OPTIMAL and sol.certified
    assert abs(sol.objective - _vertex_enumeration(c, A, b)) < 1e-8
    assert np.all(A @ sol.x <= b + 1e-9) and np.all(sol.x >= -1e-9)


@settings(max_examples=100)
@given(st.integers(0, 2**32 - 1))
def test_lp_status_matches_highs(seed):
    gen = np.random.default_rng(seed)
    m, n = gen.integers(1, 5), gen.integers(1, 7)
    A = gen.normal(size=(m, n))
    b = gen.normal(size=m)
    c = gen.normal(size=n)
    senses = list(gen.choice(["<=", "=", ">="], size=m))
    sol = lp_solve(LpProblem(c, A, senses, b))
    A_ub = [A[i] if s == "<=" else -A[i] for i, s in enumerate(senses) if s != "="]
    b_ub = [b[i] if s == "<=" else -b[i] for i, s in enumerate(senses) if s != "="]
    A_eq = [A[i] for i, s in enumerate(senses) if s == "="]
    b_eq = [b[i] for i, s in enumerate(senses) if s == "="]
    ref = linprog(c, A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None, b_eq=b_eq or None,
                  bounds=[(0, None)] * n, method="highs", options={"presolve": False})
    # HiGHS presolve may report unbounded problems as infeasible, hence no presolve
    assert sol.status == {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
    if ref.status == 0:
        assert sol.certified and abs(sol.objective - ref.fun) < 1e-7


def test_hull_square_ccw():
    h = convex_hull_2d([[0, 0], [1, 0], [1, 1], [0, 1]])
    assert sorted(h.vertices.tolist()) == [0, 1, 2, 3]
    P = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)[h.vertices]
    area = 0.5 * np.sum(P[:, 0] * np.roll(P[:, 1], -1) - np.roll(P[:, 0], -1) * P[:, 1])
    assert area == 1.0


def test_hull_collinear():
    h = convex_hull_2d([[0, 0], [1, 1], [2, 2]])
    assert sorted(h.vertices.tolist()) == [0, 2]
    assert h.boundary.tolist() == [1]


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(3, 120))
def test_hull_partition_and_orientation(seed, n):
    X = np.random.default_rng(seed).standard_normal((n, 2))
    h = convex_hull_2d(X)
    V = X[h.vertices]
    m = len(V)
    labels = np.zeros(n, int)
    labels[h.vertices] += 1
    labels[h.boundary] += 1
    labels[h.interior] += 1
    assert np.all(labels == 1)
    # every point on the left of (or on) each CCW edge: O(n h) check
    for i in range(m):
        a, b = V[i], V[(i + 1) % m]
        cross = (b[0] - a[0]) * (X[:, 1] - a[1]) - (b[1] - a[1]) * (X[:, 0] - a[0])
        assert np.all(cross >= -1e-12)


def test_in_convex_hull_examples():
    tri = [[0, 0], [1, 0], [0, 1]]
    assert in_convex_hull([1 / 3, 1 / 3], tri) == INTERIOR
    assert in_convex_hull([0, 0], tri) == BOUNDARY
    assert in_convex_hull([2, 2], tri) == OUTSIDE
    simplex3 = np.vstack([np.zeros(3), np.eye(3)])
    assert in_convex_hull(simplex3.mean(axis=0), simplex3) == INTERIOR


def test_in_convex_hull_empty():
    with pytest.raises(ValueError):
        in_convex_hull([0, 0], np.empty((0, 2)))


def test_sphere_directions():
    U = uniform_sphere_directions(RandomSource(5), 3, 100_000)
    assert np.abs(np.linalg.norm(U, axis=1) - 1).max() <= 1e-12
    assert np.abs(U.mean(axis=0)).max() < 0.02
    one = np.array([uniform_sphere_direction(RandomSource(s), 1)[0] for s in range(400)])
    assert set(one.tolist()) == {-1.0, 1.0}
    assert 150 < (one > 0).sum() < 250


def test_random_source_determinism():
    a = uniform_sphere_directions(RandomSource(9).split(1, 2), 4, 10)
    b = uniform_sphere_directions(RandomSource(9).split(1, 2), 4, 10)
    c = uniform_sphere_directions(RandomSource(9).split(1, 3), 4, 10)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
