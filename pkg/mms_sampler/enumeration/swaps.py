"""Replacement classes Z(z) for the k-swap chain, cached per block."""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass

import numpy as np

from mms_sampler.core.instance import Instance, Solution, SolutionLike, as_counts
from mms_sampler.enumeration.search import MultisetSearch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SwapKey:
    """Attribute sum V z of a removed fragment, plus its size k."""

    removed_sum: tuple[int, ...]
    k: int


class SwapCache:
    """
    Memoized Z(z) lookups for one block.

    Fragments with the same attribute sum share one replacement class, so
    the cache is keyed by (V z, k). Lookups are safe from several threads.
    """

    def __init__(self, inst: Instance):
        self.inst = inst
        self._classes: dict[SwapKey, list[np.ndarray]] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def key(self, z: SolutionLike) -> SwapKey:
        removed = as_counts(z) @ self.inst.columns
        return SwapKey(tuple(int(v) for v in removed), int(removed[self.inst.count_coord]))

    def replacements(self, z: SolutionLike) -> list[np.ndarray]:
        """All z' with ||z'||_1 = ||z||_1 and V z' = V z, including z."""
        key = self.key(z)
        with self._lock:
            cached = self._classes.get(key)
            if cached is not None:
                self.hits += 1
                return cached
        search = MultisetSearch(self.inst, target=np.asarray(key.removed_sum))
        found = [x.as_array() for x in search.iter_exact()]
        with self._lock:
            self.misses += 1
            self._classes.setdefault(key, found)
        if len(found) > 1:
            logger.debug("swap class %s has %d members", key.removed_sum, len(found))
        return found

    def stats(self) -> dict[str, int]:
        return {"classes": len(self._classes), "hits": self.hits, "misses": self.misses}


def enumerate_swaps(inst: Instance, z: SolutionLike, cache: SwapCache | None = None) -> list[Solution]:
    """
    Every size-k fragment with the same attribute sum as z.

    Raises:
        ValueError: If z is empty.
    """
    counts = as_counts(z)
    if counts.sum() < 1:
        raise ValueError("swap fragments must contain at least one household")
    cache = cache or SwapCache(inst)
    return [Solution.of(zp) for zp in cache.replacements(counts)]
