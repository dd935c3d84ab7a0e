"""Type frequencies of the base distribution, of pi, and of sampled datasets.

Two weightings are offered. "household" pools every household of every
block, so a block counts in proportion to its size. "block" averages the
per-block type frequencies, so every block counts once.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from mms_sampler.core.instance import Instance, SolutionLike, as_counts, is_exact
from mms_sampler.diagnostics.posterior import exact_posterior
from mms_sampler.errors import IncompleteEnumerationError, InfeasibleSolutionError
from mms_sampler.evaluation.projection import TypeDistribution, TypeLabel, TypeProjection

logger = logging.getLogger(__name__)

WEIGHTINGS = ("household", "block")


def _check_weighting(weighting: str) -> None:
    if weighting not in WEIGHTINGS:
        raise ValueError(f"weighting must be one of {WEIGHTINGS}, got {weighting!r}")


def _combine(
    per_block: Sequence[tuple[int, np.ndarray]], projection: TypeProjection, weighting: str
) -> TypeDistribution:
    """Fold (m_b, per-column expected counts) pairs into a type distribution."""
    groups: dict[TypeLabel, list[float]] = {label: [] for label in projection.distinct_labels()}
    for m, counts in per_block:
        scale = 1.0 if weighting == "household" else 1.0 / m
        for label, values in projection.aggregate(counts).items():
            groups[label].extend(v * scale for v in values)
    if weighting == "household":
        total = float(math.fsum(m for m, _ in per_block))
    else:
        total = float(len(per_block))
    return TypeDistribution.from_groups(groups, total)


def _usable(inst: Instance, projection: TypeProjection) -> bool:
    projection.check(inst)
    if inst.m == 0:
        logger.warning("%s has no households and is excluded", inst.name or "block")
        return False
    return True


def expected_frequencies_q(
    instances: Sequence[Instance],
    projection: TypeProjection,
    weighting: str = "household",
    limit: int | None = None,
) -> TypeDistribution:
    """
    Type frequencies expected under pi on every block.

    Raises:
        IncompleteEnumerationError: If some block's X cannot be enumerated;
            use empirical_frequencies_qhat on sampled solutions instead.
    """
    _check_weighting(weighting)
    per_block = []
    for inst in instances:
        if not _usable(inst, projection):
            continue
        try:
            post = exact_posterior(inst, limit)
        except IncompleteEnumerationError as exc:
            raise IncompleteEnumerationError(
                f"{exc}; use empirical_frequencies_qhat on sampled solutions instead"
            ) from exc
        matrix = np.vstack([x.as_array() for x in post.solutions]).astype(float)
        per_block.append((inst.m, post.probs @ matrix))
    if not per_block:
        raise ValueError("no usable blocks")
    return _combine(per_block, projection, weighting)


def empirical_frequencies_qhat(
    sampled: Sequence[tuple[Instance, SolutionLike]],
    projection: TypeProjection,
    weighting: str = "household",
) -> TypeDistribution:
    """
    Type frequencies of one sampled solution per block.

    Raises:
        InfeasibleSolutionError: If a solution is not exact for its block.
    """
    _check_weighting(weighting)
    per_block = []
    for inst, x in sampled:
        counts = as_counts(x)
        if not is_exact(inst, counts):
            raise InfeasibleSolutionError(
                f"solution {counts.tolist()} is not exact for {inst.name or 'block'}"
            )
        if _usable(inst, projection):
            per_block.append((inst.m, counts.astype(float)))
    if not per_block:
        raise ValueError("no usable blocks")
    return _combine(per_block, projection, weighting)


def pums_frequencies_p(probs: Sequence[float], projection: TypeProjection) -> TypeDistribution:
    """Base-distribution probability of each type label."""
    probs = np.asarray(probs, dtype=float)
    if probs.size != projection.num_columns:
        raise ValueError(f"{probs.size} probabilities for {projection.num_columns} columns")
    return TypeDistribution.from_groups(projection.aggregate(probs))


def tvd(a: TypeDistribution, b: TypeDistribution) -> float:
    """Total variation distance; missing labels weigh 0."""
    labels = set(a.weights) | set(b.weights)
    return 0.5 * math.fsum(abs(a.get(label) - b.get(label)) for label in labels)


@dataclass
class TvdSummary:
    """Mean and worst TVD over repeated runs."""

    mean: float
    max: float
    count: int


def summarize_tvds(values: Sequence[float]) -> TvdSummary:
    if not values:
        raise ValueError("no TVD values to summarize")
    return TvdSummary(mean=math.fsum(values) / len(values), max=max(values), count=len(values))
