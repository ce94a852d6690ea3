"""One entry point for every depth notion and method."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import approx
from .dataset import Dataset, as_points
from .depth import (
    beta_skeleton_depth,
    halfspace_count,
    lens_depth_ordinal,
    lp_depth,
    mahalanobis_depth,
    oja_depth,
    onion_depth_raw,
    peel,
    simplicial_depth,
    spatial_depth,
    zonoid_depth,
)
from .errors import DataError, UnsupportedMethodError
from .scatter import ScatterModel, fit_scatter

NOTIONS = ("mahalanobis", "lp", "halfspace", "projection", "simplicial", "oja",
           "zonoid", "spatial", "skeleton", "lens-ordinal", "onion")
EXACT = frozenset(NOTIONS) - {"projection"}
APPROX = frozenset({"halfspace", "projection", "simplicial", "oja", "skeleton"})
# notions whose plain versions are only rigid-motion invariant; a scatter
# model makes them affine invariant by whitening sample and query
WHITENABLE = frozenset({"lp", "spatial", "skeleton"})


@dataclass(frozen=True)
class DepthValue:
    value: float
    notion: str
    method: str
    raw: float | None = None

    def __float__(self):
        return float(self.value)


def check_method(notion: str, method: str) -> None:
    if notion not in NOTIONS:
        raise UnsupportedMethodError(f"unknown notion {notion!r}; supported: {', '.join(NOTIONS)}")
    if method not in ("exact", "approx"):
        raise UnsupportedMethodError(f"unknown method {method!r}; use 'exact' or 'approx'")
    if method == "exact" and notion not in EXACT:
        raise UnsupportedMethodError("exact projection depth unsupported; use the approximate method")
    if method == "approx" and notion not in APPROX:
        raise UnsupportedMethodError(
            f"no approximate method for {notion}; approximations exist for {', '.join(sorted(APPROX))}")


def resolve_model(data, whiten, mcd_alpha: float = 0.75, seed: int = 0) -> ScatterModel | None:
    if whiten is None or isinstance(whiten, ScatterModel):
        return whiten
    return fit_scatter(data, whiten, alpha=mcd_alpha, rng=seed)


def depth(y, data, notion: str = "halfspace", method: str = "exact", *, p: float = 2.0,
          beta: float = 2.0, strict: bool = True, whiten=None, mcd_alpha: float = 0.75,
          k: int = approx.DEFAULT_K, seed: int = 0, mode: str = "number", portion: float = 0.01,
          peeling=None) -> DepthValue:
    """Depth of ``y`` w.r.t. ``data`` for any supported (notion, method) pair.

    ``whiten`` is None, ``"cov"``, ``"mcd"`` or a fitted ScatterModel. It
    supplies the scatter for Mahalanobis depth, the volume normalization of
    Oja depth, and whitens sample and query for the other notions.

    For ``lens-ordinal`` the query is a sample index or a row of
    dissimilarities and ``data`` must carry a dissimilarity matrix.
    """
    check_method(notion, method)
    if notion == "lens-ordinal":
        D = data.dissimilarity if isinstance(data, Dataset) else None
        if D is None:
            raise DataError("lens-ordinal depth needs a dissimilarity matrix")
        return DepthValue(lens_depth_ordinal(y, D, strict=strict), notion, method)
    X = as_points(data)
    q = np.asarray(y, dtype=float).ravel()
    model = resolve_model(X, whiten, mcd_alpha, seed)
    if notion == "mahalanobis":
        return DepthValue(mahalanobis_depth(q, X, model=model), notion, method)
    if notion == "oja":
        if method == "exact":
            v = oja_depth(q, X, model=model)
        else:
            cfg = approx.ApproxConfig(k, seed, mode, portion)
            v = approx.oja_depth_approx(q, X, cfg, model=model)
        return DepthValue(v, notion, method)
    if model is not None:
        X = model.whiten_points(X)
        q = model.whiten_points(q)[0]
    cfg = approx.ApproxConfig(k, seed, mode, portion) if method == "approx" else None
    raw = None
    if notion == "lp":
        v = lp_depth(q, X, p=p)
    elif notion == "spatial":
        v = spatial_depth(q, X)
    elif notion == "zonoid":
        v = zonoid_depth(q, X)
    elif notion == "halfspace":
        if method == "exact":
            raw = halfspace_count(q, X)
            v = raw / X.shape[0]
        else:
            v = approx.random_tukey_depth(q, X, cfg)
    elif notion == "projection":
        v = approx.projection_depth_approx(q, X, cfg)
    elif notion == "simplicial":
        v = simplicial_depth(q, X) if method == "exact" else approx.simplicial_depth_approx(q, X, cfg)
    elif notion == "skeleton":
        if method == "exact":
            v = beta_skeleton_depth(q, X, beta=beta, strict=strict)
        else:
            v = approx.beta_skeleton_depth_approx(q, X, beta, cfg, strict=strict)
    elif notion == "onion":
        raw, layers = onion_depth_raw(q, X, peeling)
        v = raw / layers
    else:  # pragma: no cover - guarded by check_method
        raise UnsupportedMethodError(notion)
    return DepthValue(float(v), notion, method, raw)


def sample_depths(data, notion: str = "halfspace", method: str = "exact", **params) -> np.ndarray:
    """Depth of every sample point w.r.t. the whole sample."""
    check_method(notion, method)
    if notion == "lens-ordinal":
        n = data.dissimilarity.shape[0] if isinstance(data, Dataset) and data.dissimilarity is not None else 0
        if n == 0:
            raise DataError("lens-ordinal depth needs a dissimilarity matrix")
        return np.array([depth(i, data, notion, method, **params).value for i in range(n)])
    X = as_points(data)
    if notion == "onion" and params.get("whiten") is None:
        params = dict(params, peeling=peel(X))
    if params.get("whiten") is not None and not isinstance(params["whiten"], ScatterModel):
        params = dict(params, whiten=resolve_model(X, params["whiten"], params.get("mcd_alpha", 0.75),
                                                   params.get("seed", 0)))
    return np.array([depth(x, X, notion, method, **params).value for x in X])
