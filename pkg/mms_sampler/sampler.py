"""BlockSampler: one configured sampler bound to one block."""

from __future__ import annotations

import logging
from typing import Callable, List

import numpy as np

from mms_sampler.chains.config import Algorithm, ChainConfig, SampleReport
from mms_sampler.chains.hybrid import hybrid_sample, solution_log_weights
from mms_sampler.chains.reduced import reduced_chain_sample, reduced_chain_step
from mms_sampler.chains.rejection import rejection_sample
from mms_sampler.chains.rng import SeededRNG
from mms_sampler.chains.simple import (
    simple_chain_sample,
    simple_chain_step,
    truncated_simple_sample,
    truncated_simple_step,
)
from mms_sampler.core.instance import Instance, Solution, SolutionLike, as_counts
from mms_sampler.enumeration.search import SolutionSet, enumerate_top_n
from mms_sampler.enumeration.swaps import SwapCache
from mms_sampler.errors import InfeasibleSolutionError

logger = logging.getLogger(__name__)


class ProgressHandler:
    """Fan-out of per-sample progress messages to registered callbacks."""

    def __init__(self):
        self.callbacks: List[Callable[[str], None]] = []

    def add_callback(self, callback: Callable[[str], None]):
        self.callbacks.append(callback)

    def write(self, message: str):
        for callback in self.callbacks:
            try:
                callback(message)
            except Exception:
                logger.debug("progress callback failed", exc_info=True)


class BlockSampler:
    """
    Draws samples for one block with one configuration.

    The random stream, the swap cache and the enumerated top-N set persist
    across calls, so repeated sampling neither re-seeds nor re-enumerates.

    Args:
        inst: The validated block.
        config: Sampler configuration.
        start: Start state for the reduced and truncated chains; defaults
            to the top-scoring exact solution.
        rng: Stream to draw from; defaults to SeededRNG(config.seed).

    Example:
        >>> from mms_sampler.generators import gen_example1
        >>> block_b = gen_example1()[1]
        >>> sampler = BlockSampler(block_b, ChainConfig(algorithm="rejection", seed=7))
        >>> reports = sampler.run(100)
    """

    def __init__(
        self,
        inst: Instance,
        config: ChainConfig,
        start: SolutionLike | None = None,
        rng: SeededRNG | None = None,
    ):
        self.inst = inst
        self.config = config
        self.rng = rng or SeededRNG(config.seed)
        self.swap_cache = SwapCache(inst)
        self.progress = ProgressHandler()
        self._start = None if start is None else Solution.of(as_counts(start))
        self._top: SolutionSet | None = None
        self._top_weights: np.ndarray | None = None
        self._sample_count = 0

    @property
    def top_set(self) -> SolutionSet:
        """The enumerated top-N set (computed on first use)."""
        if self._top is None:
            self._top = enumerate_top_n(self.inst, self.config.top_n)
            if self._top.solutions:
                self._top_weights = solution_log_weights(self.inst, self._top.solutions)
            logger.info(
                "%s: top-%d set has %d solutions (complete=%s)",
                self.inst.name or "block", self.config.top_n, len(self._top), self._top.complete,
            )
        return self._top

    @property
    def start_state(self) -> Solution:
        if self._start is None:
            best = enumerate_top_n(self.inst, 1)
            if not best.solutions:
                raise InfeasibleSolutionError(f"{self.inst.name or 'block'} has no exact solution")
            self._start = best.solutions[0]
        return self._start

    @property
    def sample_count(self) -> int:
        return self._sample_count

    def sample(self) -> SampleReport:
        """Draw one sample."""
        cfg = self.config
        if cfg.algorithm is Algorithm.REJECTION:
            report = rejection_sample(self.inst, cfg, self.rng)
        elif cfg.algorithm is Algorithm.SIMPLE:
            report = simple_chain_sample(self.inst, cfg, self.rng)
        elif cfg.algorithm is Algorithm.TRUNCATED_SIMPLE:
            report = truncated_simple_sample(self.inst, cfg, self.start_state, self.rng)
        elif cfg.algorithm is Algorithm.REDUCED:
            report = reduced_chain_sample(
                self.inst, cfg, self.start_state, self.rng, self.swap_cache
            )
        else:
            top = self.top_set
            report = hybrid_sample(
                self.inst, cfg, self.rng, self.swap_cache, top, self._top_weights
            )
        self._sample_count += 1
        self.progress.write(
            f"sample {self._sample_count}: {list(report.solution.multiplicities)} "
            f"(iterations={report.iterations_used}, restarts={report.restarts})"
        )
        return report

    def run(self, count: int) -> list[SampleReport]:
        """Draw `count` samples from the shared stream."""
        reports = [self.sample() for _ in range(count)]
        if self.config.algorithm in (Algorithm.REDUCED, Algorithm.HYBRID):
            logger.debug("swap cache: %s", self.swap_cache.stats())
        return reports

    def step(self, x: SolutionLike) -> Solution:
        """One transition of the configured chain (for debugging and tests)."""
        cfg = self.config
        if cfg.algorithm is Algorithm.SIMPLE:
            return simple_chain_step(self.inst, cfg.gamma, x, self.rng)
        if cfg.algorithm is Algorithm.TRUNCATED_SIMPLE:
            return truncated_simple_step(self.inst, cfg.gamma, cfg.omega, x, self.rng)
        if cfg.algorithm in (Algorithm.REDUCED, Algorithm.HYBRID):
            return reduced_chain_step(self.inst, cfg.k, x, self.rng, self.swap_cache)
        raise ValueError("the rejection sampler has no transition kernel")

    def reset(self) -> None:
        """Rewind the random stream to the configured seed."""
        self.rng = SeededRNG(self.config.seed)
        self._sample_count = 0
