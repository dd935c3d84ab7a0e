"""The lazy single-coordinate Gibbs chain on feasible multisets.

Each move picks an eligible household type i and resamples its
multiplicity g in {0..g_max} with weight
f(x_{i<-g}) * exp(-gamma * ||c - V x_{i<-g}||_1). The truncated variant
gives zero weight to moves whose residual exceeds omega.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.special import gammaln

from mms_sampler.chains.config import Algorithm, ChainConfig, SampleReport
from mms_sampler.chains.rng import SeededRNG
from mms_sampler.core.instance import (
    Instance,
    Solution,
    SolutionLike,
    as_counts,
    is_exact,
    is_feasible,
    residual_norm,
)
from mms_sampler.errors import InfeasibleSolutionError, RestartCapExceeded

logger = logging.getLogger(__name__)


def resample_log_weights(
    inst: Instance,
    gamma: float,
    x: np.ndarray,
    i: int,
    omega: int | None = None,
) -> np.ndarray:
    """
    Log weights of x_{i<-g} for g = 0..g_max, up to a shared constant.

    g_max is the largest g with g * v_i <= c - V x_{i<-0}.
    """
    v = inst.columns[i]
    r = inst.target - x @ inst.columns + x[i] * v
    mask = v > 0
    g_max = int(np.min(r[mask] // v[mask]))
    g = np.arange(g_max + 1)
    if inst.uniform_target:
        log_w = np.zeros(g.size)
    else:
        rest = int(x.sum() - x[i])
        log_w = gammaln(rest + g + 1) - gammaln(g + 1) + g * inst.log_probs[i]
    norms = int(r.sum()) - g * int(v.sum())
    log_w = log_w - gamma * norms
    if omega is not None:
        log_w = np.where(norms > omega, -np.inf, log_w)
    return log_w


def _move(inst: Instance, gamma: float, x: np.ndarray, rng: SeededRNG, omega: int | None) -> np.ndarray:
    eligible = inst.eligible
    if rng.coin() or eligible.size == 0:
        return x
    i = int(eligible[rng.integers(eligible.size)])
    g = rng.gumbel_argmax(resample_log_weights(inst, gamma, x, i, omega))
    if g == x[i]:
        return x
    moved = x.copy()
    moved[i] = g
    return moved


def simple_chain_step(inst: Instance, gamma: float, x: SolutionLike, rng: SeededRNG) -> Solution:
    """One transition of the lazy simple chain from a feasible x."""
    counts = as_counts(x)
    if not is_feasible(inst, counts):
        raise InfeasibleSolutionError(f"solution {counts.tolist()} is not feasible")
    return Solution.of(_move(inst, gamma, counts, rng, None))


def truncated_simple_step(
    inst: Instance, gamma: float, omega: int, x: SolutionLike, rng: SeededRNG
) -> Solution:
    """One transition of the simple chain restricted to ||c - V x||_1 <= omega."""
    counts = as_counts(x)
    if not is_feasible(inst, counts) or residual_norm(inst, counts) > omega:
        raise InfeasibleSolutionError(
            f"solution {counts.tolist()} lies outside the residual-{omega} state space"
        )
    return Solution.of(_move(inst, gamma, counts, rng, omega))


def run_simple_chain(
    inst: Instance,
    gamma: float,
    x0: np.ndarray,
    steps: int,
    rng: SeededRNG,
    omega: int | None = None,
) -> np.ndarray:
    x = x0
    for _ in range(steps):
        x = _move(inst, gamma, x, rng, omega)
    return x


def _restarting_sample(
    inst: Instance,
    cfg: ChainConfig,
    x0: np.ndarray,
    rng: SeededRNG,
    omega: int | None,
    algorithm: Algorithm,
) -> SampleReport:
    for restart in range(cfg.max_restarts):
        x = run_simple_chain(inst, cfg.gamma, x0, cfg.t, rng, omega)
        if is_exact(inst, x):
            return SampleReport(
                solution=Solution.of(x),
                iterations_used=(restart + 1) * cfg.t,
                restarts=restart,
                accepted=True,
                rng_seed=rng.seed,
                algorithm=algorithm,
                start_state=Solution.of(x0),
            )
    logger.warning("%s chain found no exact state in %d rounds", algorithm.value, cfg.max_restarts)
    raise RestartCapExceeded(algorithm.value, cfg.max_restarts)


def simple_chain_sample(inst: Instance, cfg: ChainConfig, rng: SeededRNG | None = None) -> SampleReport:
    """
    Run t steps from the empty multiset and keep the end state if it is exact.

    Raises:
        RestartCapExceeded: After cfg.max_restarts inexact end states.
    """
    rng = rng or SeededRNG(cfg.seed)
    x0 = np.zeros(inst.num_types_n, dtype=np.int64)
    return _restarting_sample(inst, cfg, x0, rng, None, Algorithm.SIMPLE)


def truncated_simple_sample(
    inst: Instance,
    cfg: ChainConfig,
    x0: SolutionLike,
    rng: SeededRNG | None = None,
) -> SampleReport:
    """
    The restarting wrapper for the truncated chain.

    The empty multiset usually lies outside Y_omega, so rounds start from a
    caller-supplied state x0 inside it (typically an exact solution).
    """
    rng = rng or SeededRNG(cfg.seed)
    start = as_counts(x0)
    if not is_feasible(inst, start) or residual_norm(inst, start) > cfg.omega:
        raise InfeasibleSolutionError("truncated chain start lies outside its state space")
    return _restarting_sample(inst, cfg, start, rng, cfg.omega, Algorithm.TRUNCATED_SIMPLE)
