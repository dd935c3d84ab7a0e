"""Enumerate the best N solutions, then sample exactly or continue with swaps."""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from mms_sampler.chains.config import Algorithm, ChainConfig, SampleReport, StartRule
from mms_sampler.chains.reduced import candidate_log_weights, run_reduced_chain
from mms_sampler.chains.rng import SeededRNG
from mms_sampler.core.instance import Instance, Solution
from mms_sampler.enumeration.search import SolutionSet, best_start_state, enumerate_top_n
from mms_sampler.enumeration.swaps import SwapCache
from mms_sampler.errors import InfeasibleSolutionError

logger = logging.getLogger(__name__)


def solution_log_weights(inst: Instance, solutions: Sequence[Solution]) -> np.ndarray:
    """Log target weights of exact solutions, up to a shared constant."""
    matrix = np.vstack([x.as_array() for x in solutions])
    return candidate_log_weights(inst, matrix)


def exact_sample(
    inst: Instance,
    solutions: Sequence[Solution],
    rng: SeededRNG,
    log_weights: np.ndarray | None = None,
) -> Solution:
    """A draw from the target restricted to `solutions`."""
    if not solutions:
        raise InfeasibleSolutionError("cannot sample from an empty solution set")
    if log_weights is None:
        log_weights = solution_log_weights(inst, solutions)
    return solutions[rng.gumbel_argmax(log_weights)]


def hybrid_sample(
    inst: Instance,
    cfg: ChainConfig,
    rng: SeededRNG | None = None,
    cache: SwapCache | None = None,
    solution_set: SolutionSet | None = None,
    log_weights: np.ndarray | None = None,
) -> SampleReport:
    """
    Sample via the top-N set; exact when the set covers every solution.

    Args:
        solution_set: A precomputed top-N set, reused across samples.
        log_weights: Precomputed weights of solution_set's members.
    """
    rng = rng or SeededRNG(cfg.seed)
    top = solution_set if solution_set is not None else enumerate_top_n(inst, cfg.top_n)
    if not top.solutions:
        raise InfeasibleSolutionError(f"{inst.name or 'block'} has no exact solution")

    if cfg.start is StartRule.BEST and not top.complete:
        x0, certified = best_start_state(inst, top)
        if not certified:
            logger.debug("best start state is not certified as the posterior mode")
    else:
        x0 = exact_sample(inst, top.solutions, rng, log_weights)

    if top.complete:
        return SampleReport(
            solution=x0,
            iterations_used=0,
            restarts=0,
            accepted=True,
            rng_seed=rng.seed,
            algorithm=Algorithm.HYBRID,
            start_state=x0,
            exact_mode=True,
        )
    steps = cfg.t if x0.size >= cfg.k else 0
    x = run_reduced_chain(inst, cfg.k, x0.as_array(), steps, rng, cache or SwapCache(inst))
    return SampleReport(
        solution=Solution.of(x),
        iterations_used=steps,
        restarts=0,
        accepted=True,
        rng_seed=rng.seed,
        algorithm=Algorithm.HYBRID,
        start_state=x0,
    )
