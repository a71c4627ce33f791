"""Soft-margin SVM dual solved by simplified sequential minimal optimization.

The trainer sweeps all examples, picks KKT violators as the first index
of a working pair and a randomly drawn partner as the second (falling
back to the next candidates when a draw yields a blocked step), and
solves each two-variable subproblem in closed form. It stops after
`max_passes` consecutive sweeps find no KKT violation beyond the
tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.rng import RngState
from ..errors import DegenerateDataError, DimensionError, NumericError, UsageError
from .kernel import rbf_kernel_matrix, resolve_gamma

_MIN_ALPHA_STEP = 1e-8
_SWEEP_CAP = 5000


@dataclass(frozen=True)
class SvmConfig:
    c: float = 1.0
    gamma: float | str = "auto"
    tolerance: float = 1e-3
    max_passes: int = 10

    def __post_init__(self):
        if self.c <= 0:
            raise UsageError(f"C must be positive, got {self.c}")
        if self.gamma != "auto" and float(self.gamma) <= 0:
            raise UsageError(f"gamma must be positive or 'auto', got {self.gamma}")
        if self.tolerance <= 0 or self.max_passes < 1:
            raise UsageError("tolerance must be positive and max_passes >= 1")


@dataclass
class SvmModel:
    """Kernelized decision function: f(x) = sum_i coef_i k(sv_i, x) + bias.

    coef_i = alpha_i * y_i with y in {-1, +1}, +1 meaning landslide.
    Optional embedding standardization (fit by `fit_head`) travels with
    the model.
    """

    support_vectors: np.ndarray  # (M, D)
    dual_coefs: np.ndarray  # (M,)
    bias: float
    gamma: float
    c: float
    embed_center: np.ndarray | None = None
    embed_scale: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.support_vectors.shape[1]


def dual_objective(alpha: np.ndarray, y: np.ndarray, k: np.ndarray) -> float:
    """W(alpha) = sum(alpha) - 0.5 * alpha' (yy' * K) alpha."""
    ay = alpha * y
    return float(alpha.sum() - 0.5 * ay @ k @ ay)


def model_dual_objective(model: SvmModel) -> float:
    """Dual objective recovered from a fitted model.

    alpha_i = |coef_i| on support vectors and 0 elsewhere, and
    alpha_i alpha_j y_i y_j = coef_i coef_j, so the model alone determines it.
    """
    coef = model.dual_coefs
    k = rbf_kernel_matrix(model.support_vectors, model.support_vectors, model.gamma)
    return float(np.abs(coef).sum() - 0.5 * coef @ k @ coef)


def fit_smo(x: np.ndarray, y: np.ndarray, cfg: SvmConfig, rng: RngState) -> SvmModel:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 2 or y.shape != (x.shape[0],):
        raise DimensionError(f"expected x (N, D) and y (N,), got {x.shape} and {y.shape}")
    if not np.isfinite(x).all():
        raise NumericError("features contain NaN or Inf")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise UsageError("labels must be -1 or +1")
    n = x.shape[0]
    if n < 2 or len(np.unique(y)) < 2:
        raise DegenerateDataError("SVM fitting needs at least one sample of each class")

    gamma = resolve_gamma(cfg.gamma, x)
    k = rbf_kernel_matrix(x, x, gamma)
    c, tol = cfg.c, cfg.tolerance

    alpha = np.zeros(n)
    b = 0.0
    f = np.zeros(n)  # f_i = sum_j alpha_j y_j K_ij + b, maintained incrementally

    def try_pair(i: int, j: int, e_i: float) -> bool:
        nonlocal b, f
        e_j = f[j] - y[j]
        a_i_old, a_j_old = alpha[i], alpha[j]
        if y[i] != y[j]:
            lo = max(0.0, a_j_old - a_i_old)
            hi = min(c, c + a_j_old - a_i_old)
        else:
            lo = max(0.0, a_i_old + a_j_old - c)
            hi = min(c, a_i_old + a_j_old)
        if lo == hi:
            return False
        eta = 2.0 * k[i, j] - k[i, i] - k[j, j]
        if eta >= 0:
            return False
        a_j = a_j_old - y[j] * (e_i - e_j) / eta
        a_j = min(hi, max(lo, a_j))
        if abs(a_j - a_j_old) < _MIN_ALPHA_STEP:
            return False
        a_i = a_i_old + y[i] * y[j] * (a_j_old - a_j)

        b1 = b - e_i - y[i] * (a_i - a_i_old) * k[i, i] - y[j] * (a_j - a_j_old) * k[i, j]
        b2 = b - e_j - y[i] * (a_i - a_i_old) * k[i, j] - y[j] * (a_j - a_j_old) * k[j, j]
        if 0.0 < a_i < c:
            b_new = b1
        elif 0.0 < a_j < c:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)

        f += (
            y[i] * (a_i - a_i_old) * k[:, i]
            + y[j] * (a_j - a_j_old) * k[:, j]
            + (b_new - b)
        )
        alpha[i], alpha[j] = a_i, a_j
        b = b_new
        return True

    quiet_passes = 0
    stalled_passes = 0
    sweeps = 0
    while quiet_passes < cfg.max_passes:
        if sweeps >= _SWEEP_CAP:
            raise NumericError(f"SMO did not converge within {_SWEEP_CAP} sweeps")
        sweeps += 1
        violations = 0
        updates = 0
        for i in range(n):
            e_i = f[i] - y[i]
            if not ((y[i] * e_i < -tol and alpha[i] < c) or (y[i] * e_i > tol and alpha[i] > 0)):
                continue
            violations += 1
            # random partner first; if the step is blocked, scan onward so a
            # genuine violation is never dropped just because one draw failed
            start = int(rng.integers(0, n - 1))
            for off in range(n - 1):
                j = (start + off) % (n - 1)
                if j >= i:
                    j += 1
                if try_pair(i, j, e_i):
                    updates += 1
                    break
        # converged when full sweeps stay violation-free; a violating sweep
        # with no movable pair is a fixed point of pairwise updates
        quiet_passes = quiet_passes + 1 if violations == 0 else 0
        stalled_passes = stalled_passes + 1 if (violations > 0 and updates == 0) else 0
        if stalled_passes >= cfg.max_passes:
            break

    sv = alpha > 0.0
    return SvmModel(
        support_vectors=x[sv].copy(),
        dual_coefs=(alpha * y)[sv].copy(),
        bias=float(b),
        gamma=gamma,
        c=c,
    )


def decision(model: SvmModel, x: np.ndarray) -> float:
    """Signed score for one feature vector; >= 0 classifies as landslide."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.dim,):
        raise DimensionError(f"expected a vector of dim {model.dim}, got shape {x.shape}")
    kvec = rbf_kernel_matrix(model.support_vectors, x[None, :], model.gamma)[:, 0]
    return float(model.dual_coefs @ kvec + model.bias)


def decision_batch(model: SvmModel, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.dim:
        raise DimensionError(f"expected (N, {model.dim}) features, got shape {x.shape}")
    k = rbf_kernel_matrix(x, model.support_vectors, model.gamma)
    return k @ model.dual_coefs + model.bias


def predict(model: SvmModel, x: np.ndarray) -> np.ndarray:
    """Hard labels in {0, 1}; ties at exactly zero go to landslide (1)."""
    return (decision_batch(model, x) >= 0.0).astype(np.int64)
