"""Location/scatter estimates and the whitening transform.

Whitening maps ``x -> R^{-1/2} (x - location)``. Depths that are only
invariant under rigid motions and uniform scaling become affine invariant
when computed on whitened data.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, as_points
from .errors import DataError, SingularScatterError
from .numerics import RandomSource, as_generator, cholesky_factor, inverse_sqrt


@dataclass(frozen=True, eq=False)
class ScatterModel:
    location: np.ndarray
    scatter: np.ndarray
    whitener: np.ndarray
    kind: str = "moment"
    alpha: float | None = None
    support: np.ndarray | None = None  # indices of the h-subset for MCD

    @classmethod
    def from_moments(cls, location, scatter, kind="moment", alpha=None, support=None):
        location = np.asarray(location, dtype=float).ravel()
        scatter = np.asarray(scatter, dtype=float)
        scatter = 0.5 * (scatter + scatter.T)
        if scatter.shape != (location.size, location.size):
            raise ValueError("location and scatter dimensions disagree")
        try:
            whitener = inverse_sqrt(scatter)
        except SingularScatterError as exc:
            raise SingularScatterError(
                f"{exc}; the sample may not span R^{location.size} (reduce d or add data)"
            ) from None
        for a in (location, scatter, whitener):
            a.setflags(write=False)
        return cls(location, scatter, whitener, kind, alpha, support)

    @property
    def d(self) -> int:
        return self.location.size

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.scatter))

    def mahalanobis_sq(self, y) -> np.ndarray:
        """Squared Mahalanobis norms of the rows of ``y`` (or of one point)."""
        z = self.whiten_points(y)
        return np.einsum("ij,ij->i", z, z)

    def whiten_points(self, y) -> np.ndarray:
        y = np.atleast_2d(np.asarray(y, dtype=float))
        if y.shape[1] != self.d:
            raise DataError(f"point dimension {y.shape[1]} does not match model dimension {self.d}")
        return (y - self.location) @ self.whitener.T


def moment_scatter(data) -> ScatterModel:
    """Mean and covariance with divisor n (moments of the empirical law)."""
    X = as_points(data)
    n = X.shape[0]
    if n < 2:
        raise DataError("moment scatter needs at least 2 points")
    mu = X.mean(axis=0)
    C = X - mu
    cov = C.T @ C / n
    return ScatterModel.from_moments(mu, cov, kind="moment")


def _subset_moments(X, idx):
    S = X[idx]
    mu = S.mean(axis=0)
    C = S - mu
    return mu, C.T @ C / S.shape[0]


def _logdet_or_none(cov):
    try:
        low = cholesky_factor(cov)
    except SingularScatterError:
        return None
    return 2.0 * float(np.log(np.diag(low)).sum())


def _c_steps(X, idx, h, max_csteps, trace=None):
    """Iterate concentration steps from subset ``idx``; return (logdet, idx, mu, cov)."""
    mu, cov = _subset_moments(X, idx)
    ld = _logdet_or_none(cov)
    if ld is None:
        return None
    if trace is not None:
        trace.append(ld)
    for _ in range(max_csteps):
        low = cholesky_factor(cov)
        z = np.linalg.solve(low, (X - mu).T)
        dist = np.einsum("ij,ij->j", z, z)
        new_idx = np.sort(np.argsort(dist, kind="stable")[:h])
        if np.array_equal(new_idx, idx):
            break
        new_mu, new_cov = _subset_moments(X, new_idx)
        new_ld = _logdet_or_none(new_cov)
        if new_ld is None or new_ld > ld:
            break
        idx, mu, cov = new_idx, new_mu, new_cov
        if trace is not None:
            trace.append(new_ld)
        if new_ld == ld:
            break
        ld = new_ld
    return ld, idx, mu, cov


def mcd_scatter(data, alpha: float = 0.75, rng=0, n_starts: int = 500,
                max_csteps: int = 50, return_trace: bool = False):
    """Minimum covariance determinant location and scatter.

    Each of ``n_starts`` random (d+1)-point subsets is grown to ``h =
    ceil(alpha * n)`` points by concentration steps (keep the ``h`` points
    with the smallest Mahalanobis distance to the current fit, refit, repeat
    until the subset stops changing). The subset with the smallest
    determinant wins; ties go to the earliest start. No consistency factor
    is applied.

    With ``return_trace`` the log-determinants visited by the winning start
    are returned too.
    """
    X = as_points(data)
    n, d = X.shape
    if not 0.5 < alpha <= 1:
        raise ValueError("alpha must lie in (0.5, 1]")
    h = math.ceil(alpha * n - 1e-12)
    if h <= d:
        raise DataError(f"MCD needs h = ceil(alpha*n) = {h} > d = {d}")
    if h == n:
        model = moment_scatter(X)
        model = ScatterModel.from_moments(model.location, model.scatter, kind="mcd",
                                          alpha=alpha, support=np.arange(n))
        return (model, []) if return_trace else model
    gen = as_generator(rng if not isinstance(rng, int) else RandomSource(rng))
    best = None
    best_trace = None
    for start in range(n_starts):
        perm = gen.permutation(n)
        idx = np.sort(perm[: d + 1])
        # enlarge the seed subset until its covariance is regular
        k = d + 1
        while _logdet_or_none(_subset_moments(X, idx)[1]) is None and k < n:
            k += 1
            idx = np.sort(perm[:k])
        # first concentration step from the seed fit to an h-subset
        mu, cov = _subset_moments(X, idx)
        try:
            low = cholesky_factor(cov)
        except SingularScatterError:
            continue
        z = np.linalg.solve(low, (X - mu).T)
        dist = np.einsum("ij,ij->j", z, z)
        idx = np.sort(np.argsort(dist, kind="stable")[:h])
        trace = [] if return_trace else None
        res = _c_steps(X, idx, h, max_csteps, trace)
        if res is None:
            continue
        if best is None or res[0] < best[0]:
            best = res
            best_trace = trace
    if best is None:
        raise SingularScatterError("every MCD subset had a singular covariance")
    _, idx, mu, cov = best
    model = ScatterModel.from_moments(mu, cov, kind="mcd", alpha=alpha, support=idx)
    return (model, best_trace) if return_trace else model


def mcd_exhaustive(data, alpha: float = 0.75) -> ScatterModel:
    """Exact MCD by enumerating every h-subset. Only for tiny samples."""
    X = as_points(data)
    n, d = X.shape
    h = math.ceil(alpha * n - 1e-12)
    if h <= d:
        raise DataError(f"MCD needs h = ceil(alpha*n) = {h} > d = {d}")
    if math.comb(n, h) > 2_000_000:
        raise ValueError("too many subsets for exhaustive MCD")
    best = None
    for comb in itertools.combinations(range(n), h):
        idx = np.array(comb)
        mu, cov = _subset_moments(X, idx)
        ld = _logdet_or_none(cov)
        if ld is not None and (best is None or ld < best[0]):
            best = (ld, idx, mu, cov)
    if best is None:
        raise SingularScatterError("every subset had a singular covariance")
    _, idx, mu, cov = best
    return ScatterModel.from_moments(mu, cov, kind="mcd", alpha=alpha, support=idx)


def fit_scatter(data, kind: str = "cov", alpha: float = 0.75, rng=0, **kw) -> ScatterModel | None:
    """Dispatch on a whitening name: ``none``, ``cov`` (moment) or ``mcd``."""
    if kind in (None, "none"):
        return None
    if kind in ("cov", "moment"):
        return moment_scatter(data)
    if kind == "mcd":
        return mcd_scatter(data, alpha=alpha, rng=rng, **kw)
    raise ValueError(f"unknown scatter kind {kind!r}")


def whiten(data, model: ScatterModel) -> Dataset:
    """Apply ``x -> R^{-1/2}(x - location)`` to every sample point."""
    X = as_points(data)
    if X.shape[1] != model.d:
        raise DataError(f"data dimension {X.shape[1]} does not match model dimension {model.d}")
    ids = data.ids if isinstance(data, Dataset) else ()
    return Dataset(model.whiten_points(X), ids)


def whiten_point(y, model: ScatterModel) -> np.ndarray:
    return model.whiten_points(y)[0]
