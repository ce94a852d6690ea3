"""Approximate depths: random projections and sampled subsets.

Random Tukey depth and the projection-depth approximation take a minimum
(resp. maximum) over ``k`` random directions, so they bound the exact
value from above and only move towards it as directions are added. The
simplicial, Oja and beta-skeleton approximations average over ``k``
sampled vertex subsets and are unbiased.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import as_points
from .depth._common import cofactor_normals, n_choose, prepare
from .depth.simplicial import simplices_contain
from .errors import DataError
from .numerics import RandomSource, as_generator, uniform_sphere_directions

DEFAULT_K = 1000


@dataclass(frozen=True)
class ApproxConfig:
    """Number of directions or subsets, seed, and subset-selection mode."""

    k: int = DEFAULT_K
    seed: int = 0
    mode: str = "number"
    portion: float = 0.01

    def __post_init__(self):
        if int(self.k) < 1:
            raise ValueError("k must be >= 1")
        if self.mode not in ("number", "portion"):
            raise ValueError("mode must be 'number' or 'portion'")
        if not 0 < self.portion <= 1:
            raise ValueError("portion must lie in (0, 1]")


def _cfg(cfg, **kw) -> ApproxConfig:
    if cfg is None:
        return ApproxConfig(**{k: v for k, v in kw.items() if v is not None})
    return cfg


def directions_for(d: int, cfg: ApproxConfig) -> np.ndarray:
    """The ``k`` seeded unit directions; a larger ``k`` extends a smaller one."""
    return uniform_sphere_directions(RandomSource(cfg.seed), d, int(cfg.k))


def random_tukey_depth(y, data, cfg: ApproxConfig | None = None, *, k=None, seed=None,
                       directions=None) -> float:
    """Minimum over random directions of the univariate halfspace depth.

    Always at least the exact halfspace depth. Coincident projections are
    counted on both sides.
    """
    q, X = prepare(y, data)
    n, d = X.shape
    if directions is None:
        directions = directions_for(d, _cfg(cfg, k=k, seed=seed))
    U = np.atleast_2d(directions)
    # copies of y lie in every closed halfspace; count them apart from the
    # projections so rounding in the two products cannot drop them
    same = np.all(X == q, axis=1)
    proj = X[~same] @ U.T                # (m, k)
    t = U @ q                            # (k,)
    le = np.count_nonzero(proj <= t, axis=0)
    ge = np.count_nonzero(proj >= t, axis=0)
    return float((np.minimum(le, ge).min() + same.sum()) / n)


def random_tukey_depth_all(data, cfg: ApproxConfig | None = None, *, k=None, seed=None,
                           leave_one_out: bool = True, directions=None) -> np.ndarray:
    """Random Tukey depth of every sample point.

    Each direction's projections are sorted once and every point is located
    by binary search. With ``leave_one_out`` a point's depth is taken w.r.t.
    the other ``n - 1`` points.
    """
    X = as_points(data)
    n, d = X.shape
    if directions is None:
        directions = directions_for(d, _cfg(cfg, k=k, seed=seed))
    U = np.atleast_2d(directions)
    own = 1 if leave_one_out else 0
    denom = n - own
    if denom < 1:
        raise DataError("need at least 2 points for leave-one-out depths")
    best = np.full(n, np.iinfo(np.int64).max)
    for s in range(0, U.shape[0], 256):
        P = X @ U[s:s + 256].T            # (n, b)
        srt = np.sort(P, axis=0)
        for j in range(P.shape[1]):
            col = srt[:, j]
            le = np.searchsorted(col, P[:, j], side="right") - own
            ge = n - np.searchsorted(col, P[:, j], side="left") - own
            np.minimum(best, np.minimum(le, ge), out=best)
    return best / denom


def _lower_median(a: np.ndarray, axis: int = 0) -> np.ndarray:
    m = a.shape[axis]
    return np.partition(a, (m - 1) // 2, axis=axis).take((m - 1) // 2, axis=axis)


def projection_depth_approx(y, data, cfg: ApproxConfig | None = None, *, k=None, seed=None,
                            directions=None) -> float:
    """``1 / (1 + max_p |<p,y> - med| / MAD)`` over random directions.

    Medians are lower medians. A zero MAD with a nonzero numerator makes
    the outlyingness infinite (depth 0); with a zero numerator the
    direction contributes nothing.
    """
    q, X = prepare(y, data)
    n, d = X.shape
    if n < 2:
        raise DataError("projection depth needs at least 2 points")
    if directions is None:
        directions = directions_for(d, _cfg(cfg, k=k, seed=seed))
    U = np.atleast_2d(directions)
    P = X @ U.T
    t = U @ q
    med = _lower_median(P)
    mad = _lower_median(np.abs(P - med))
    num = np.abs(t - med)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(mad > 0, num / np.where(mad > 0, mad, 1.0), np.where(num > 0, np.inf, 0.0))
    worst = float(out.max())
    return 0.0 if math.isinf(worst) else 1.0 / (1.0 + worst)


def _unrank_colex(ranks: np.ndarray, n: int, size: int) -> np.ndarray:
    """Subsets with the given colexicographic ranks (vectorized)."""
    r = ranks.astype(np.int64).copy()
    out = np.empty((r.size, size), dtype=np.int64)
    c = np.arange(n)
    for i in range(size, 0, -1):
        table = np.array([n_choose(int(v), i) for v in c], dtype=np.int64)
        pos = np.searchsorted(table, r, side="right") - 1
        out[:, i - 1] = pos
        r -= table[pos]
    return out


def sample_subsets(n: int, size: int, cfg: ApproxConfig) -> np.ndarray:
    """Index subsets for the Monte-Carlo estimators.

    ``number`` mode draws ``k`` subsets independently and uniformly (no
    repeated index inside a draw). ``portion`` mode takes a deterministic
    stratified share of all subsets: evenly spaced colexicographic ranks,
    which is every subset when ``portion = 1``.
    """
    if size > n:
        raise DataError(f"need at least {size} points, got {n}")
    total = n_choose(n, size)
    if cfg.mode == "portion":
        m = max(1, math.ceil(cfg.portion * total - 1e-9))
        if total >= 2**62:
            raise ValueError("too many subsets for portion mode")
        if m >= total:
            ranks = np.arange(total, dtype=np.int64)
        else:
            ranks = np.unique(np.floor(np.arange(m) * (total / m)).astype(np.int64))
        return _unrank_colex(ranks, n, size)
    gen = as_generator(RandomSource(cfg.seed))
    k = int(cfg.k)
    idx = gen.integers(0, n, size=(k, size))
    while True:
        srt = np.sort(idx, axis=1)
        dup = (np.diff(srt, axis=1) == 0).any(axis=1)
        if not dup.any():
            return idx
        idx[dup] = gen.integers(0, n, size=(int(dup.sum()), size))


def simplicial_depth_approx(y, data, cfg: ApproxConfig | None = None, **kw) -> float:
    """Fraction of sampled (d+1)-subsets whose closed simplex contains ``y``."""
    cfg = _cfg(cfg, **kw)
    q, X = prepare(y, data)
    n, d = X.shape
    idx = sample_subsets(n, d + 1, cfg)
    V = X - q
    V = V / max(np.abs(V).max(), 1e-300)
    hits = 0
    for s in range(0, idx.shape[0], 1 << 16):
        hits += int(simplices_contain(V[idx[s:s + (1 << 16)]]).sum())
    return hits / idx.shape[0]


def oja_depth_approx(y, data, cfg: ApproxConfig | None = None, model=None, **kw) -> float:
    """Oja depth from the mean volume over sampled d-subsets."""
    cfg = _cfg(cfg, **kw)
    q, X = prepare(y, data)
    n, d = X.shape
    idx = sample_subsets(n, d, cfg)
    V = X - q
    parts = []
    for s in range(0, idx.shape[0], 1 << 16):
        S = V[idx[s:s + (1 << 16)]]      # (b, d, d)
        C = cofactor_normals(S[:, :-1, :]) if d > 1 else np.ones((S.shape[0], 1))
        parts.append(np.abs(np.einsum("bj,bj->b", C, S[:, -1, :])))
    vol = math.fsum(np.concatenate(parts)) / (idx.shape[0] * math.factorial(d))
    if model is not None:
        vol /= math.sqrt(model.det)
    return 1.0 / (1.0 + vol)


def beta_skeleton_depth_approx(y, data, beta: float = 2.0, cfg: ApproxConfig | None = None,
                               strict: bool = True, **kw) -> float:
    """Fraction of sampled pairs whose beta-influence region contains ``y``."""
    if beta < 1:
        raise ValueError("beta must be >= 1")
    cfg = _cfg(cfg, **kw)
    q, X = prepare(y, data)
    n = X.shape[0]
    idx = sample_subsets(n, 2, cfg)
    A, B = X[idx[:, 0]] - q, X[idx[:, 1]] - q
    a = np.einsum("ij,ij->i", A, A)
    b = np.einsum("ij,ij->i", B, B)
    G = np.einsum("ij,ij->i", A, B)
    # same root-free ball test as the exact count
    m1 = beta * (b - G) - b
    m2 = beta * (a - G) - a
    ok = (m1 > 0) & (m2 > 0) if strict else (m1 >= 0) & (m2 >= 0)
    return float(ok.mean())
