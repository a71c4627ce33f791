"""RBF kernel evaluation."""
from __future__ import annotations

import numpy as np

from ..errors import DimensionError, UsageError


def rbf_kernel(x: np.ndarray, z: np.ndarray, gamma: float) -> float:
    """exp(-gamma * ||x - z||^2); equals 1 iff x == z."""
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if x.shape != z.shape or x.ndim != 1:
        raise DimensionError(f"kernel arguments must be equal-length vectors, got {x.shape} vs {z.shape}")
    if gamma <= 0:
        raise UsageError(f"gamma must be positive, got {gamma}")
    d = x - z
    return float(np.exp(-gamma * np.dot(d, d)))


def rbf_kernel_matrix(a: np.ndarray, b: np.ndarray, gamma: float) -> np.ndarray:
    """Pairwise kernel between rows of a (N, D) and b (M, D)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[1]:
        raise DimensionError(f"kernel matrices need matching feature dims, got {a.shape} vs {b.shape}")
    if gamma <= 0:
        raise UsageError(f"gamma must be positive, got {gamma}")
    sq = (
        (a * a).sum(axis=1)[:, None]
        + (b * b).sum(axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    np.maximum(sq, 0.0, out=sq)  # rounding can push tiny distances negative
    return np.exp(-gamma * sq)


def resolve_gamma(gamma, x: np.ndarray) -> float:
    """'auto' resolves to 1 / (D * var(X)) over all feature entries."""
    if gamma == "auto":
        x = np.asarray(x, dtype=np.float64)
        var = float(x.var())
        if var <= 0.0:
            return 1.0  # constant features carry no scale information
        return 1.0 / (x.shape[1] * var)
    g = float(gamma)
    if g <= 0:
        raise UsageError(f"gamma must be positive, got {gamma}")
    return g
