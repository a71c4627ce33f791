"""Deterministic random streams for all stochastic operations.

Streams are backed by the counter-based Philox-4x64 generator keyed by
(seed, stream id), so a given (seed, stream) pair yields the same draw
sequence on every run and platform. Child streams are derived from the
parent's stream id with a splitmix64-style hash and never consume draws
from the parent, which lets batch operations hand one independent stream
to each sample regardless of processing order.
"""
from __future__ import annotations

import numpy as np

from ..errors import UsageError

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15


def _mix64(a: int, b: int) -> int:
    """splitmix64 finalizer over a*phi + b + 1; collision-resistant stream ids."""
    x = (a * _GOLDEN + b + 1) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


class RngState:
    """A named position in the (seed, stream) space of Philox streams.

    Drawing advances the internal counter; `child` does not.
    """

    __slots__ = ("seed", "stream", "_gen")

    def __init__(self, seed: int, stream: int = 0):
        seed = int(seed)
        if not 0 <= seed <= _MASK64:
            raise UsageError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.stream = int(stream) & _MASK64
        key = np.array([self.seed, self.stream], dtype=np.uint64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def child(self, index: int) -> "RngState":
        """Independent stream for sub-task `index`; parent state untouched."""
        return RngState(self.seed, _mix64(self.stream, int(index) & _MASK64))

    # thin draw wrappers so call sites never touch the Generator directly

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        return self._gen.uniform(low, high, size=size)

    def normal(self, size=None):
        return self._gen.standard_normal(size=size)

    def beta(self, a: float, b: float) -> float:
        return float(self._gen.beta(a, b))

    def integers(self, low: int, high: int, size=None):
        """Uniform integers in [low, high) like numpy's Generator.integers."""
        return self._gen.integers(low, high, size=size)

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)

    def __repr__(self) -> str:
        return f"RngState(seed={self.seed}, stream={self.stream:#x})"
