"""Seeded random streams for reproducible sampling runs.

All randomness flows through numpy's counter-based Philox generator so a
(seed, instance, config) triple always reproduces the same draws.
"""

from __future__ import annotations

import hashlib
import secrets

import numpy as np

SEED_MASK = (1 << 64) - 1


def stable_hash64(label: str) -> int:
    """64-bit hash of a label that does not change between interpreter runs."""
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def derive_seed(base_seed: int, label: str) -> int:
    """Per-block seed: base seed XOR the stable hash of the block label."""
    return (int(base_seed) ^ stable_hash64(label)) & SEED_MASK


def ephemeral_seed() -> int:
    return secrets.randbits(64)


class SeededRNG:
    """A Philox-backed random stream with derived sub-streams."""

    def __init__(self, seed: int) -> None:
        self._seed = int(seed) & SEED_MASK
        self._gen = np.random.Generator(np.random.Philox(self._seed))

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def random(self) -> float:
        """Return a random float in [0, 1)."""
        return float(self._gen.random())

    def coin(self, p: float = 0.5) -> bool:
        """Return True with probability p."""
        return self._gen.random() < p

    def integers(self, high: int) -> int:
        """Uniform integer in [0, high)."""
        return int(self._gen.integers(high))

    def gumbel_argmax(self, log_weights: np.ndarray) -> int:
        """Index drawn with probability proportional to exp(log_weights)."""
        noise = self._gen.gumbel(size=log_weights.shape)
        return int(np.argmax(log_weights + noise))

    def categorical(self, probs: np.ndarray, size: int) -> np.ndarray:
        return self._gen.choice(probs.size, size=size, p=probs)

    def subset(self, population: int, k: int) -> np.ndarray:
        """k distinct positions out of range(population)."""
        return self._gen.choice(population, size=k, replace=False)

    def fork(self, label: str) -> "SeededRNG":
        """Create a new stream with a seed derived from this one and a label."""
        return SeededRNG(derive_seed(self._seed, label))
