"""Exact posteriors from enumeration and their comparison with samplers."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from mms_sampler.chains.config import ChainConfig
from mms_sampler.chains.rng import SeededRNG
from mms_sampler.config import get_limits_config
from mms_sampler.core.instance import Instance, Solution, SolutionLike, is_exact, log_target, residual_norm
from mms_sampler.diagnostics.kernels import KernelKind, build_kernel
from mms_sampler.diagnostics.spectral import kernel_components
from mms_sampler.enumeration.search import enumerate_exact, enumerate_feasible
from mms_sampler.errors import IncompleteEnumerationError
from mms_sampler.sampler import BlockSampler

logger = logging.getLogger(__name__)


@dataclass
class Posterior:
    """The target distribution over an enumerated X."""

    solutions: list[Solution]
    probs: np.ndarray

    def __post_init__(self):
        self.index = {x: a for a, x in enumerate(self.solutions)}

    def prob(self, x: Solution) -> float:
        a = self.index.get(x)
        return 0.0 if a is None else float(self.probs[a])

    def as_dict(self) -> dict[Solution, float]:
        return dict(zip(self.solutions, self.probs.tolist()))


def exact_posterior(inst: Instance, limit: int | None = None) -> Posterior:
    """
    Enumerate X and normalize the target over it.

    Raises:
        IncompleteEnumerationError: If X has more than `limit` members.
    """
    limit = limit or get_limits_config().diagnostics.reduced_state_cap
    found = enumerate_exact(inst, limit)
    if not found.complete:
        raise IncompleteEnumerationError(
            f"{inst.name or 'block'} has more than {limit} exact solutions"
        )
    if not found.solutions:
        raise IncompleteEnumerationError(f"{inst.name or 'block'} has no exact solution")
    log_w = np.array([log_target(inst, x) for x in found.solutions])
    return Posterior(found.solutions, np.exp(log_w - logsumexp(log_w)))


def histogram_tvd(samples: Sequence[Solution], reference: Posterior) -> float:
    """d_TV between the empirical law of `samples` and the reference."""
    counts = Counter(samples)
    total = len(samples)
    if total == 0:
        raise ValueError("no samples")
    covered = sum(abs(counts.get(x, 0) / total - p) for x, p in reference.as_dict().items())
    # samples outside X are mass the reference does not have
    outside = sum(c for x, c in counts.items() if x not in reference.index) / total
    return 0.5 * (covered + outside)


def empirical_tvd(
    inst: Instance,
    cfg: ChainConfig,
    reference: Posterior,
    num_samples: int,
    start: SolutionLike | None = None,
    rng: SeededRNG | None = None,
) -> float:
    """Run the configured sampler num_samples times and compare with reference."""
    sampler = BlockSampler(inst, cfg, start=start, rng=rng)
    samples = [report.solution for report in sampler.run(num_samples)]
    value = histogram_tvd(samples, reference)
    logger.info("%s: empirical TVD %.5f over %d samples", cfg.algorithm.value, value, num_samples)
    return value


def p_star_curve(inst: Instance, gammas: Sequence[float], cap: int | None = None) -> list[tuple[float, float]]:
    """
    Exact mass of X under the penalized target on Y, for each gamma.

    Raises:
        StateSpaceTooLarge: If Y exceeds the cap.
    """
    states = enumerate_feasible(inst, cap or get_limits_config().diagnostics.simple_state_cap)
    base = np.array([log_target(inst, x) for x in states])
    norms = np.array([residual_norm(inst, x) for x in states], dtype=float)
    exact = np.array([is_exact(inst, x) for x in states], dtype=bool)
    curve = []
    for gamma in gammas:
        log_w = base - gamma * norms
        total = logsumexp(log_w)
        mass = float(np.exp(logsumexp(log_w[exact]) - total)) if exact.any() else 0.0
        curve.append((float(gamma), mass))
    return curve


def connected_components(inst: Instance, k: int) -> list[list[Solution]]:
    """Partition of X into the communicating classes of the k-swap chain."""
    kernel = build_kernel(inst, KernelKind.reduced(k))
    parts = [[kernel.states[a] for a in comp] for comp in kernel_components(kernel)]
    logger.info("%s: %d component(s) for k=%d", inst.name or "block", len(parts), k)
    return parts
