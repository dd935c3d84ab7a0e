"""The lazy k-swap chain on exact solutions.

A move removes k households chosen uniformly by position, and replaces them
with a size-k fragment of the same attribute sum drawn in proportion to the
resulting state's weight. Every state it visits is exact.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.special import gammaln

from mms_sampler.chains.config import Algorithm, ChainConfig, SampleReport
from mms_sampler.chains.rng import SeededRNG
from mms_sampler.core.instance import Instance, Solution, SolutionLike, as_counts, is_exact
from mms_sampler.enumeration.swaps import SwapCache
from mms_sampler.errors import InfeasibleSolutionError

logger = logging.getLogger(__name__)


def log_comb(x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """log C(x, z) elementwise."""
    return gammaln(x + 1) - gammaln(z + 1) - gammaln(x - z + 1)


def candidate_log_weights(inst: Instance, candidates: np.ndarray) -> np.ndarray:
    """Log target weights of same-size exact states, up to a shared constant."""
    if inst.uniform_target:
        return np.zeros(candidates.shape[0])
    return candidates @ inst.log_probs - gammaln(candidates + 1).sum(axis=1)


def _move(inst: Instance, k: int, x: np.ndarray, rng: SeededRNG, cache: SwapCache) -> np.ndarray:
    m = int(x.sum())
    if rng.coin():
        return x
    items = np.repeat(np.arange(x.size), x)
    z = np.bincount(items[rng.subset(m, k)], minlength=x.size)
    # stay with probability 1 - 1/prod C(x_i, z_i) so each distinct z has weight 1/C(m, k)
    if rng.random() >= np.exp(-log_comb(x, z).sum()):
        return x
    replacements = cache.replacements(z)
    if len(replacements) == 1:
        return x
    candidates = (x - z) + np.vstack(replacements)
    j = rng.gumbel_argmax(candidate_log_weights(inst, candidates))
    return candidates[j]


def reduced_chain_step(
    inst: Instance,
    k: int,
    x: SolutionLike,
    rng: SeededRNG,
    cache: SwapCache | None = None,
) -> Solution:
    """
    One transition of the k-swap chain from an exact state.

    With fewer than k households the step is a no-op.
    """
    counts = as_counts(x)
    if not is_exact(inst, counts):
        raise InfeasibleSolutionError(f"solution {counts.tolist()} is not exact")
    if counts.sum() < k:
        logger.warning("block has %d households, fewer than k=%d: swap step is a no-op", counts.sum(), k)
        return Solution.of(counts)
    return Solution.of(_move(inst, k, counts, rng, cache or SwapCache(inst)))


def run_reduced_chain(
    inst: Instance, k: int, x0: np.ndarray, steps: int, rng: SeededRNG, cache: SwapCache
) -> np.ndarray:
    x = x0
    for _ in range(steps):
        x = _move(inst, k, x, rng, cache)
    return x


def reduced_chain_sample(
    inst: Instance,
    cfg: ChainConfig,
    x0: SolutionLike,
    rng: SeededRNG | None = None,
    cache: SwapCache | None = None,
) -> SampleReport:
    """Run cfg.t swap steps from an exact start state and report the end state."""
    rng = rng or SeededRNG(cfg.seed)
    start = as_counts(x0)
    if not is_exact(inst, start):
        raise InfeasibleSolutionError(f"start state {start.tolist()} is not exact")
    steps = cfg.t
    if start.sum() < cfg.k:
        logger.warning("block has %d households, fewer than k=%d: chain stays put", start.sum(), cfg.k)
        steps = 0
    x = run_reduced_chain(inst, cfg.k, start, steps, rng, cache or SwapCache(inst))
    return SampleReport(
        solution=Solution.of(x),
        iterations_used=steps,
        restarts=0,
        accepted=True,
        rng_seed=rng.seed,
        algorithm=Algorithm.REDUCED,
        start_state=Solution.of(start),
    )
