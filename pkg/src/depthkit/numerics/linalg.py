"""Small dense linear-algebra helpers for symmetric positive definite matrices."""
from __future__ import annotations

import numpy as np

from ..errors import SingularScatterError


def _check_square(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def cholesky_factor(a: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of a symmetric PD matrix.

    Raises SingularScatterError if any pivot falls below
    ``1e-12 * trace(a) / d``.
    """
    a = _check_square(a)
    if not np.allclose(a, a.T, rtol=1e-10, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not symmetric")
    d = a.shape[0]
    floor = 1e-12 * np.trace(a) / d
    if not floor > 0:
        raise SingularScatterError("singular scatter (non-positive trace)")
    low = np.zeros_like(a)
    for j in range(d):
        pivot = a[j, j] - low[j, :j] @ low[j, :j]
        if pivot <= floor:
            raise SingularScatterError(
                f"singular scatter: Cholesky pivot {pivot:.3e} at index {j}"
            )
        low[j, j] = np.sqrt(pivot)
        low[j + 1:, j] = (a[j + 1:, j] - low[j + 1:, :j] @ low[j, :j]) / low[j, j]
    return low


def cholesky_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric PD matrix via its Cholesky factor."""
    low = cholesky_factor(a)
    d = low.shape[0]
    low_inv = np.linalg.solve(low, np.eye(d))
    inv = low_inv.T @ low_inv
    return 0.5 * (inv + inv.T)


def inverse_sqrt(a: np.ndarray) -> np.ndarray:
    """Symmetric inverse square root ``A^{-1/2}`` from an eigendecomposition."""
    a = _check_square(a)
    cholesky_factor(a)  # PD check with the same pivot rule
    w, v = np.linalg.eigh(0.5 * (a + a.T))
    return (v / np.sqrt(w)) @ v.T


def log_det_spd(a: np.ndarray) -> float:
    low = cholesky_factor(a)
    return 2.0 * float(np.log(np.diag(low)).sum())
