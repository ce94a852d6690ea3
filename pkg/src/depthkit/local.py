"""Localized depths: kernelized spatial depth and beta-localization."""
from __future__ import annotations

import math

import numpy as np

from .api import DepthValue, depth
from .dataset import as_points
from .depth._common import COINCIDE_TOL, prepare
from .errors import LocalizationError
from .regions import prob_central_region
from .scatter import ScatterModel, moment_scatter

DEFAULT_LOCALIZATION = 0.33


def gaussian_kernel(t: np.ndarray, h: float) -> np.ndarray:
    """``(sqrt(2 pi h))^{-d} exp(-||t / h||^2 / 2)`` for the rows of ``t``."""
    t = np.atleast_2d(t)
    d = t.shape[1]
    sq = np.einsum("ij,ij->i", t, t) / (h * h)
    return (math.sqrt(2.0 * math.pi * h)) ** (-d) * np.exp(-0.5 * sq)


def kernelized_spatial_depth(y, data, h: float = 0.5, whiten_first=False) -> DepthValue:
    """Kernelized spatial depth with a Gaussian kernel of bandwidth ``h``.

    The raw value ``mean_i k_h(y - x_i) - || mean_i k_h(y - x_i) u_i ||``
    (``u_i`` the unit vector from ``x_i`` to ``y``, 0 when they coincide)
    lies in ``[0, k_h(0)]``; ``value`` divides it by ``k_h(0)``.
    ``whiten_first`` is a flag (moment whitening) or a ScatterModel.
    """
    if h <= 0:
        raise ValueError("bandwidth must be positive")
    q, X = prepare(y, data)
    if whiten_first is not False and whiten_first is not None:
        model = whiten_first if isinstance(whiten_first, ScatterModel) else moment_scatter(X)
        X = model.whiten_points(X)
        q = model.whiten_points(q)[0]
    D = q - X
    kern = gaussian_kernel(D, h)
    norms = np.linalg.norm(D, axis=1)
    scale = max(float(np.abs(X).max()), float(np.abs(q).max()), 1.0)
    nz = norms > COINCIDE_TOL * scale
    U = np.zeros_like(D)
    U[nz] = D[nz] / norms[nz, None]
    raw = float(kern.mean() - np.linalg.norm((kern[:, None] * U).mean(axis=0)))
    raw = max(raw, 0.0)
    k0 = float(gaussian_kernel(np.zeros((1, X.shape[1])), h)[0])
    return DepthValue(raw / k0, "kernelized-spatial", "exact", raw)


def symmetrized_sample(y, data) -> np.ndarray:
    """The sample followed by its reflection ``2y - x_i`` through ``y``."""
    q, X = prepare(y, data)
    return np.vstack([X, 2.0 * q - X])


def beta_localized_depth(y, data, notion: str = "halfspace", beta_loc: float = DEFAULT_LOCALIZATION,
                         method: str = "exact", **params) -> DepthValue:
    """Global depth of ``y`` conditioned on a neighbourhood of ``y``.

    The neighbourhood is the probability-content region of level
    ``beta_loc`` (same notion) of the sample symmetrized about ``y``. The
    original sample points inside it form the conditioned sample, and the
    depth of ``y`` is computed w.r.t. them. ``beta_loc = 1`` keeps every
    point and returns the global depth.
    """
    if not 0 < beta_loc <= 1:
        raise ValueError("beta_loc must lie in (0, 1]")
    q, X = prepare(y, data)
    n, d = X.shape
    Z = symmetrized_sample(q, X)
    conf = dict(params)
    skel = conf.pop("beta", 2.0)
    region = prob_central_region(Z, notion, beta_loc, method, skeleton_beta=skel, **conf)
    kept = np.sort(region.members[region.members < n])
    if kept.size < d + 1:
        raise LocalizationError(
            f"localization too aggressive: neighbourhood keeps {kept.size} of {n} points, need {d + 1}")
    v = depth(q, X[kept], notion, method, **params)
    return DepthValue(v.value, v.notion, method, v.raw)
