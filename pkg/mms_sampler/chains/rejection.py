"""Exact posterior sampling by drawing households i.i.d. until the block matches."""

from __future__ import annotations

import logging

import numpy as np

from mms_sampler.chains.config import Algorithm, ChainConfig, SampleReport
from mms_sampler.chains.rng import SeededRNG
from mms_sampler.core.instance import Instance, Solution
from mms_sampler.errors import RestartCapExceeded

logger = logging.getLogger(__name__)


def rejection_sample(inst: Instance, cfg: ChainConfig, rng: SeededRNG | None = None) -> SampleReport:
    """
    Draw m households from the base distribution per round; accept on an exact match.

    A round stops as soon as the running total exceeds c in some coordinate.
    Accepted samples follow the posterior exactly.

    Raises:
        RestartCapExceeded: After cfg.max_restarts rejected rounds.
    """
    rng = rng or SeededRNG(cfg.seed)
    m, n = inst.m, inst.num_types_n
    drawn = 0
    for restart in range(cfg.max_restarts):
        draws = rng.categorical(inst.probs, m)
        running = np.cumsum(inst.columns[draws], axis=0)
        over = (running > inst.target).any(axis=1) if m else np.zeros(0, dtype=bool)
        if over.any():
            drawn += int(np.argmax(over)) + 1
            continue
        drawn += m
        total = running[-1] if m else np.zeros_like(inst.target)
        if np.array_equal(total, inst.target):
            counts = np.bincount(draws, minlength=n)
            return SampleReport(
                solution=Solution.of(counts),
                iterations_used=drawn,
                restarts=restart,
                accepted=True,
                rng_seed=rng.seed,
                algorithm=Algorithm.REJECTION,
            )
    logger.warning("rejection sampler gave up on %s", inst.name or "block")
    raise RestartCapExceeded(Algorithm.REJECTION.value, cfg.max_restarts)
