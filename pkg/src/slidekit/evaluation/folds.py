"""Stratified fold assignment."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core.rng import RngState
from ..errors import InsufficientDataError, UsageError


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: np.ndarray  # fold index per sample position

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        if a.ndim != 1 or (a < 0).any() or (a >= self.k).any():
            raise UsageError("fold assignment must map every sample into [0, k)")
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)

    def val_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)


def make_folds(labels, k: int, rng: RngState) -> FoldPlan:
    """Random stratified assignment: shuffle within each class, deal round-robin.

    Every fold's class counts stay within one sample of the exact
    proportional share.
    """
    y = np.asarray(labels)
    if k < 2:
        raise UsageError(f"k must be at least 2, got {k}")
    if y.ndim != 1 or y.size == 0:
        raise UsageError("labels must be a non-empty vector")
    assignment = np.empty(y.size, dtype=np.int64)
    for ci, cls in enumerate(np.unique(y)):
        members = np.flatnonzero(y == cls)
        if members.size < k:
            raise InsufficientDataError(
                f"class {cls!r} has {members.size} samples, fewer than k={k}"
            )
        shuffled = members[rng.child(ci).permutation(members.size)]
        assignment[shuffled] = np.arange(shuffled.size) % k
    return FoldPlan(k=k, assignment=assignment)
