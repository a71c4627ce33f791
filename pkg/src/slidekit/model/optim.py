"""Adam with bias correction and the learning-rate schedules."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionError, UsageError

SCHEDULE_KINDS = ("constant", "step", "cosine_annealing")


@dataclass
class AdamState:
    t: int
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def init_adam(params: dict[str, np.ndarray]) -> AdamState:
    return AdamState(
        t=0,
        m={k: np.zeros_like(p) for k, p in params.items()},
        v={k: np.zeros_like(p) for k, p in params.items()},
    )


def adam_step(
    params: dict[str, np.ndarray],
    grads: dict[str, np.ndarray],
    state: AdamState,
    lr_t: float,
) -> tuple[dict[str, np.ndarray], AdamState]:
    """One in-place Adam update; returns the (mutated) params and state."""
    for k, p in params.items():
        if grads[k].shape != p.shape:
            raise DimensionError(f"gradient shape {grads[k].shape} != param shape {p.shape} for {k!r}")
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1**state.t
    c2 = 1.0 - b2**state.t
    for k, p in params.items():
        g = grads[k]
        state.m[k] = b1 * state.m[k] + (1.0 - b1) * g
        state.v[k] = b2 * state.v[k] + (1.0 - b2) * (g * g)
        m_hat = state.m[k] / c1
        v_hat = state.v[k] / c2
        p -= (lr_t * m_hat / (np.sqrt(v_hat) + state.eps)).astype(p.dtype)
    return params, state


@dataclass(frozen=True)
class LrSchedule:
    kind: str = "constant"
    base_lr: float = 3e-4
    step_period: int = 15
    step_decay: float = 0.1
    t_max: int = 50
    eta_min: float = 0.0

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise UsageError(f"schedule kind must be one of {SCHEDULE_KINDS}, got {self.kind!r}")
        if self.base_lr <= 0:
            raise UsageError(f"base_lr must be positive, got {self.base_lr}")
        if self.step_period < 1 or self.step_decay <= 0:
            raise UsageError("step schedule needs period >= 1 and decay > 0")
        if self.t_max < 1 or self.eta_min < 0:
            raise UsageError("cosine schedule needs t_max >= 1 and eta_min >= 0")


def lr_at(schedule: LrSchedule, epoch: int) -> float:
    if epoch < 0:
        raise UsageError(f"epoch must be non-negative, got {epoch}")
    if schedule.kind == "constant":
        return schedule.base_lr
    if schedule.kind == "step":
        return schedule.base_lr * schedule.step_decay ** (epoch // schedule.step_period)
    # cosine annealing; endpoints returned exactly, clamped past t_max
    if epoch == 0:
        return schedule.base_lr
    if epoch >= schedule.t_max:
        return schedule.eta_min
    cos = math.cos(math.pi * epoch / schedule.t_max)
    return schedule.eta_min + 0.5 * (schedule.base_lr - schedule.eta_min) * (1.0 + cos)
