"""Random block generators whose targets come from a sampled multiset."""

from __future__ import annotations

import itertools
import logging
from typing import Sequence

import numpy as np

from mms_sampler.chains.rng import SeededRNG
from mms_sampler.config import get_limits_config
from mms_sampler.core.instance import Instance, make_instance
from mms_sampler.errors import InstanceValidationError

logger = logging.getLogger(__name__)

MIN_PROB = 1e-12


def sample_target(columns: np.ndarray, probs: np.ndarray, m: int, rng: SeededRNG) -> np.ndarray:
    """Sum of m household vectors drawn i.i.d. from probs, so X is never empty."""
    draws = rng.categorical(probs, m)
    counts = np.bincount(draws, minlength=columns.shape[0]).astype(np.int64)
    return counts @ columns


def gen_random(
    seed: int,
    n: int,
    d: int,
    m: int,
    density: float = 1.0,
    *,
    entry_max: int | None = None,
    concentration: float | None = None,
    name: str = "",
) -> Instance:
    """
    Random block with n distinct household types over d coordinates.

    The last coordinate is the household count. Other entries are nonzero
    with probability `density` and then uniform on {1..entry_max}. Base
    probabilities come from a symmetric Dirichlet.

    Raises:
        InstanceValidationError: If n distinct columns cannot be drawn.
    """
    limits = get_limits_config().generators
    entry_max = limits.entry_max if entry_max is None else entry_max
    concentration = limits.dirichlet_concentration if concentration is None else concentration
    if n < 1 or d < 1 or m < 0:
        raise ValueError(f"need n, d >= 1 and m >= 0 (got n={n}, d={d}, m={m})")
    if not 0 < density <= 1:
        raise ValueError(f"density must lie in (0, 1], got {density}")

    rng = SeededRNG(seed)
    gen = rng.generator
    seen: set[tuple[int, ...]] = set()
    rows: list[tuple[int, ...]] = []
    attempts = limits.distinct_column_attempts * n
    while len(rows) < n and attempts > 0:
        attempts -= 1
        values = gen.integers(1, entry_max + 1, size=d - 1)
        mask = gen.random(d - 1) < density
        column = tuple(int(v) for v in values * mask) + (1,)
        if column not in seen:
            seen.add(column)
            rows.append(column)
    if len(rows) < n:
        raise InstanceValidationError(
            f"cannot draw {n} distinct columns with d={d}, entries <= {entry_max}, "
            f"density={density}"
        )

    columns = np.asarray(rows, dtype=np.int64)
    probs = np.maximum(gen.dirichlet(np.full(n, concentration)), MIN_PROB)
    probs = probs / probs.sum()
    target = sample_target(columns, probs, m, rng)
    logger.debug("gen_random seed=%s n=%s d=%s m=%s", seed, n, d, m)
    return make_instance(columns, probs, target, count_coord=d - 1, name=name)


def gen_hyperrectangle(
    ranges: Sequence[tuple[int, int]],
    m: int,
    seed: int = 0,
    name: str = "",
) -> Instance:
    """
    Block whose household types are every lattice point of a hyperrectangle.

    Args:
        ranges: Inclusive (low, high) bounds per attribute.
        m: Household count.
        seed: Seed for drawing the target multiset.

    Raises:
        InstanceValidationError: If the lattice exceeds the configured cap.
    """
    cap = get_limits_config().generators.hyperrectangle_cap
    sizes = [hi - lo + 1 for lo, hi in ranges]
    if any(lo < 0 or size < 1 for (lo, _), size in zip(ranges, sizes)):
        raise ValueError(f"ranges must be nonempty nonnegative intervals: {list(ranges)}")
    if int(np.prod(sizes, dtype=np.int64)) > cap:
        raise InstanceValidationError(f"hyperrectangle has more than {cap} lattice points")

    points = itertools.product(*(range(lo, hi + 1) for lo, hi in ranges))
    columns = np.asarray([tuple(p) + (1,) for p in points], dtype=np.int64)
    n = columns.shape[0]
    probs = np.full(n, 1.0 / n)
    target = sample_target(columns, probs, m, SeededRNG(seed))
    return make_instance(columns, probs, target, count_coord=len(ranges), name=name)
