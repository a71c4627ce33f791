"""Soft-label KL-divergence loss over logits."""
from __future__ import annotations

import numpy as np

from ..core.image import validate_soft_rows
from ..errors import DimensionError


def kl_soft_loss(logits: np.ndarray, targets: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean KL(target || softmax(logits)) and its gradient w.r.t. logits.

    Convention 0*log(0) = 0, so hard one-hot targets reduce the loss to
    plain cross-entropy. Gradient is (softmax - target) / N. Everything
    is computed in float64 regardless of input dtype.
    """
    z = np.asarray(logits, dtype=np.float64)
    t = validate_soft_rows(targets)
    if z.shape != t.shape:
        raise DimensionError(f"logits shape {z.shape} != targets shape {t.shape}")
    n = z.shape[0]

    zs = z - z.max(axis=1, keepdims=True)
    log_p = zs - np.log(np.exp(zs).sum(axis=1, keepdims=True))
    t_log_t = np.where(t > 0, t * np.log(np.maximum(t, 1e-300)), 0.0)
    loss = float((t_log_t - t * log_p).sum() / n)
    grad = (np.exp(log_p) - t) / n
    return loss, grad
