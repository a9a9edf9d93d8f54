"""Counter-based random number generation.

Every stochastic choice in the lab (environment steps, exploration, goal
relabeling, Monte-Carlo verifiers) draws from an ``Rng``. It wraps numpy's
Philox bit generator, whose output depends only on the seed and the number of
draws, so identical seeds replay identical streams on every platform.
"""

from typing import Optional, Union

import numpy as np


class Rng:
    """Single-owner random stream seeded from a 64-bit integer."""

    def __init__(self, seed: Union[int, np.random.SeedSequence]) -> None:
        if isinstance(seed, np.random.SeedSequence):
            self._seed_sequence = seed
            self.seed: Optional[int] = None
        else:
            if seed < 0:
                raise ValueError("seed must be non-negative")
            self._seed_sequence = np.random.SeedSequence(seed)
            self.seed = seed
        self.generator = np.random.Generator(np.random.Philox(self._seed_sequence))

    def spawn(self, n: int) -> list["Rng"]:
        """Derive ``n`` independent child streams."""
        return [Rng(child) for child in self._seed_sequence.spawn(n)]

    def random(self, size: Optional[int] = None) -> Union[float, np.ndarray]:
        """Uniform draws on [0, 1)."""
        if size is None:
            return float(self.generator.random())
        return self.generator.random(size)

    def integers(self, high: int, size: Optional[int] = None) -> Union[int, np.ndarray]:
        """Uniform integers on [0, high)."""
        if size is None:
            return int(self.generator.integers(high))
        return self.generator.integers(high, size=size)

    def categorical(self, probs: np.ndarray) -> int:
        """Draw one index from a probability vector."""
        cumulative = np.cumsum(probs)
        u = self.generator.random() * cumulative[-1]
        return int(min(np.searchsorted(cumulative, u, side="right"), len(probs) - 1))

    def categorical_rows(self, probs: np.ndarray) -> np.ndarray:
        """Draw one index per row of a (n, k) matrix of probability vectors."""
        cumulative = np.cumsum(probs, axis=1)
        u = self.generator.random(probs.shape[0])[:, None] * cumulative[:, -1:]
        return np.minimum((cumulative <= u).sum(axis=1), probs.shape[1] - 1)
