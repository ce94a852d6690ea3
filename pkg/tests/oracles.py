"""Independent brute-force reference implementations used only by the tests.

They share no code with the package: containment and counts are decided
with exact rational arithmetic or plain enumeration.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog


def halfspace_count_general_position(y, X):
    """Tukey count by enumerating hyperplanes through y and d-1 sample points.

    Valid for samples in general position relative to y: the optimal closed
    halfspace can be rotated about y until its boundary holds d-1 sample
    points and then tilted so that they fall outside, leaving only the
    strict side. Points equal to y lie in every halfspace.
    """
    X = np.asarray(X, float)
    y = np.asarray(y, float)
    n, d = X.shape
    V = X - y
    at_y = np.all(V == 0, axis=1)
    W = V[~at_y]
    m = W.shape[0]
    if d == 1:
        return int(min((W[:, 0] > 0).sum(), (W[:, 0] < 0).sum()) + at_y.sum())
    if m < d - 1:
        return int(at_y.sum())
    best = m
    for comb in itertools.combinations(range(m), d - 1):
        # normal = null vector of the d-1 chosen directions
        _, _, vt = np.linalg.svd(W[list(comb)])
        u = vt[-1]
        s = W @ u
        tol = 1e-9 * np.abs(W).max()
        pos = int((s > tol).sum())
        neg = int((s < -tol).sum())
        best = min(best, pos, neg)
    return int(best + at_y.sum())


def _frac_solve(A, b):
    """Solve a square rational system; None if singular."""
    k = len(A)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for c in range(k):
        piv = next((r for r in range(c, k) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for r in range(k):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [M[i][k] / M[i][i] for i in range(k)]


def simplex_contains_rational(simplex, y):
    """Closed containment of y in a full-dimensional integer simplex; None if flat."""
    d = len(y)
    # barycentric system: sum l_k v_k = y, sum l_k = 1
    A = [[int(simplex[k][i]) for k in range(d + 1)] for i in range(d)] + [[1] * (d + 1)]
    b = [Fraction(int(v)) for v in y] + [Fraction(1)]
    lam = _frac_solve(A, b)
    if lam is None:
        return None
    return all(v >= 0 for v in lam)


def simplicial_count_rational(y, X):
    """Count of closed simplices containing y; None if some simplex is flat."""
    n, d = np.asarray(X).shape
    total = 0
    for comb in itertools.combinations(range(n), d + 1):
        inside = simplex_contains_rational([X[i] for i in comb], y)
        if inside is None:
            return None
        total += inside
    return total


def skeleton_count_rational(y, X, beta):
    """Pairs whose open beta-lens contains y, compared in exact rationals."""
    beta = Fraction(beta)
    h = beta / 2
    Xf = [[Fraction(int(v)) for v in row] for row in X]
    yf = [Fraction(int(v)) for v in y]

    def sq(a, b):
        return sum((p - q) ** 2 for p, q in zip(a, b))

    count = 0
    for a, b in itertools.combinations(Xf, 2):
        r2 = h * h * sq(a, b)
        c1 = [h * p + (1 - h) * q for p, q in zip(a, b)]
        c2 = [h * q + (1 - h) * p for p, q in zip(a, b)]
        count += sq(yf, c1) < r2 and sq(yf, c2) < r2
    return count


def _det(M):
    M = [list(r) for r in M]
    k = len(M)
    det = Fraction(1)
    for c in range(k):
        piv = next((r for r in range(c, k) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, k):
            f = M[r][c] / M[c][c]
            M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return det


def oja_mean_volume_rational(y, X):
    """Mean volume of the simplices spanned by y and d sample points, as a Fraction."""
    n, d = np.asarray(X).shape
    yf = [Fraction(int(v)) for v in y]
    tot = Fraction(0)
    cnt = 0
    for comb in itertools.combinations(range(n), d):
        M = [[Fraction(int(X[i][j])) - yf[j] for j in range(d)] for i in comb]
        tot += abs(_det(M))
        cnt += 1
    return tot / (cnt * math.factorial(d))


def zonoid_depth_1d_bisection(t, x, iters=200):
    """1-D zonoid depth by bisection on the region endpoints.

    The alpha-region is [lo(alpha), hi(alpha)] where lo averages the lowest
    alpha-share of the mass: every point carries weight 1/(alpha n) up to a
    total of one.
    """
    x = np.sort(np.asarray(x, float))
    n = x.size

    def lo(alpha):
        cap = 1.0 / (alpha * n)
        rem, acc = 1.0, 0.0
        for v in x:
            w = min(cap, rem)
            acc += w * v
            rem -= w
            if rem <= 0:
                break
        return acc

    def hi(alpha):
        return -lo_neg(alpha)

    def lo_neg(alpha):
        cap = 1.0 / (alpha * n)
        rem, acc = 1.0, 0.0
        for v in -x[::-1]:
            w = min(cap, rem)
            acc += w * v
            rem -= w
            if rem <= 0:
                break
        return acc

    def inside(alpha):
        return lo(alpha) <= t + 1e-15 and t <= hi(alpha) + 1e-15

    if not inside(1.0 / n):
        return 0.0
    a, b = 1.0 / n, 1.0
    if inside(b):
        return 1.0
    for _ in range(iters):
        mid = 0.5 * (a + b)
        if inside(mid):
            a = mid
        else:
            b = mid
    return a


def zonoid_depth_lp(y, X):
    """min t s.t. sum l x = y, sum l = 1, 0 <= l <= t, solved with HiGHS."""
    X = np.asarray(X, float)
    n, d = X.shape
    c = np.zeros(n + 1)
    c[-1] = 1.0
    A_eq = np.zeros((d + 1, n + 1))
    A_eq[:d, :n] = X.T
    A_eq[d, :n] = 1.0
    b_eq = np.append(np.asarray(y, float), 1.0)
    A_ub = np.hstack([np.eye(n), -np.ones((n, 1))])
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * (n + 1), method="highs")
    if res.status == 2:
        return 0.0
    return 1.0 / (n * res.x[-1])


def in_hull_lp(y, S):
    """Feasibility of a convex combination of S equal to y."""
    S = np.asarray(S, float)
    m, d = S.shape
    A_eq = np.vstack([S.T, np.ones(m)])
    b_eq = np.append(np.asarray(y, float), 1.0)
    res = linprog(np.zeros(m), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * m, method="highs")
    return res.status == 0


def onion_layers_lp(X):
    """Layer index of every point by LP peeling (closed-layer rule).

    Layer j holds the points of the current set that are not interior to
    its hull. A point counts as interior when the 2d points at distance eps
    along the coordinate axes all lie in the hull (LP feasibility), which is
    reliable for random continuous samples.
    """
    X = np.asarray(X, float)
    n, d = X.shape
    scale = max(np.ptp(X, axis=0).max(), 1.0)
    eps = 1e-7 * scale
    layer = np.zeros(n, dtype=int)
    alive = np.arange(n)
    j = 0
    while alive.size:
        j += 1
        S = X[alive]
        interior = []
        for i in alive:
            ok = all(in_hull_lp(X[i] + s * eps * e, S) for e in np.eye(d) for s in (1, -1))
            interior.append(ok)
        interior = np.array(interior)
        if not interior.any():
            layer[alive] = j
            break
        layer[alive[~interior]] = j
        alive = alive[interior]
    return layer


def spatial_depth_direct(y, X):
    y = np.asarray(y, float)
    acc = np.zeros(y.size)
    for x in np.asarray(X, float):
        diff = y - x
        nrm = math.sqrt(sum(v * v for v in diff))
        if nrm > 0:
            acc += diff / nrm
    return 1.0 - float(np.linalg.norm(acc / len(X)))


def lp_depth_direct(y, X, p):
    tot = 0.0
    for x in np.asarray(X, float):
        tot += sum(abs(a - b) ** p for a, b in zip(y, x)) ** (1.0 / p)
    return 1.0 / (1.0 + tot / len(X))
