"""Deterministic seeded randomness.

All randomized routines take a SeededStream rather than a bare seed, so
that repeated runs are byte-for-byte reproducible and independent
substreams can be split off without coordination.  The underlying
generator is Philox (4x64, counter-based); the same (seed, stream) pair
yields the same draws on every platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PRNG_ID = "philox4x64"

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeededStream:
    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        key = (self.seed & _MASK64, self.stream & _MASK64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "SeededStream":
        """A stream independent of self, deterministic in (self, index)."""
        return SeededStream(self.seed, (self.stream * 1_000_003 + index + 1) & _MASK64)
