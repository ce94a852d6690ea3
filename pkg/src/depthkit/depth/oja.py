"""Oja (simplicial volume) depth."""
from __future__ import annotations

import math

import numpy as np

from ..errors import DataError
from ._common import cofactor_normals, combination_blocks, n_choose, prepare


def oja_mean_volume(y, data) -> float:
    """Mean volume of the simplices ``conv{y, x_i1, ..., x_id}`` over all d-subsets.

    Each volume is ``|det(x_i1 - y, ..., x_id - y)| / d!``. The subsets are
    grouped by their first ``d - 1`` indices: one cofactor vector per group
    turns the determinants against every later point into a single matrix
    product.
    """
    q, X = prepare(y, data)
    n, d = X.shape
    if n < d:
        raise DataError(f"Oja depth needs n >= d = {d} points, got {n}")
    V = X - q
    if d == 1:
        return float(np.abs(V[:, 0]).mean())
    total = 0.0
    after = np.arange(n)[None, :]
    for block in combination_blocks(n, d - 1, max_rows=max(1, (1 << 22) // n)):
        C = cofactor_normals(V[block])
        dets = np.abs(C @ V.T)
        dets[after <= block[:, -1:]] = 0.0
        total += math.fsum(dets.sum(axis=1))
    return total / (math.factorial(d) * n_choose(n, d))


def oja_depth(y, data, model=None) -> float:
    """``1 / (1 + mean simplex volume)``.

    With a scatter ``model`` the volumes are divided by ``sqrt(det R)``,
    which makes the depth affine invariant.
    """
    vol = oja_mean_volume(y, data)
    if model is not None:
        vol /= math.sqrt(model.det)
    return 1.0 / (1.0 + vol)
