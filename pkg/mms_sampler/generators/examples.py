"""Hand-built blocks with known structure: the toy three-block state, the
disconnected 4-type block, and the slow-mixing family V_ell."""

from __future__ import annotations

import itertools
from math import comb

import numpy as np

from mms_sampler.config import get_limits_config
from mms_sampler.core.instance import Instance, make_instance

# Household types as (white, black, households)
EXAMPLE1_TYPES = [(0, 2, 1), (1, 1, 1), (2, 0, 1)]
EXAMPLE1_PROBS = [0.25, 0.5, 0.25]
EXAMPLE1_TARGETS = {
    "block_A": (0, 2, 1),
    "block_B": (2, 2, 2),
    "block_C": (2, 0, 1),
}
EXAMPLE1_ATTRIBUTES = ("white", "black", "households")


def gen_example1(b_copies: int = 1) -> list[Instance]:
    """
    The three-block toy state.

    Block A holds one household of two Black persons, block C one household
    of two white persons, and block B two households with two white and two
    Black persons in total. `b_copies` repeats block B to build larger
    statewide families.
    """
    if b_copies < 1:
        raise ValueError("b_copies must be at least 1")
    blocks = [("block_A", EXAMPLE1_TARGETS["block_A"])]
    for i in range(b_copies):
        name = "block_B" if i == 0 else f"block_B{i + 1}"
        blocks.append((name, EXAMPLE1_TARGETS["block_B"]))
    blocks.append(("block_C", EXAMPLE1_TARGETS["block_C"]))
    return [
        make_instance(
            EXAMPLE1_TYPES,
            EXAMPLE1_PROBS,
            target,
            count_coord=2,
            name=name,
            attribute_names=EXAMPLE1_ATTRIBUTES,
        )
        for name, target in blocks
    ]


def gen_disconnected_example() -> Instance:
    """Four household types whose two exact solutions differ by a 3-swap only."""
    v = np.array(
        [
            [3, 0, 0, 1],
            [0, 3, 0, 1],
            [0, 0, 3, 1],
            [1, 1, 1, 1],
        ],
        dtype=np.int64,
    )
    # v is printed attribute-by-type; columns of v are the household types
    return make_instance(v.T, [0.25] * 4, [3, 3, 3, 3], count_coord=3, name="disconnected")


def _half_block(ell: int) -> np.ndarray:
    """[M | 0 | S | T] with ell rows."""
    pairs = [(i, i) for i in range(ell)] + list(itertools.combinations(range(ell), 2))
    m_block = np.zeros((ell, len(pairs)), dtype=np.int64)
    for col, (i, j) in enumerate(pairs):
        m_block[i, col] += ell
        m_block[j, col] += ell
    zero = np.zeros((ell, 1), dtype=np.int64)
    s_block = np.zeros((ell, ell - 2), dtype=np.int64)
    for col in range(ell - 2):
        s_block[: col + 2, col] = 2 * ell
    t_block = np.tile(np.arange(2, 2 * ell + 1, dtype=np.int64), (ell, 1))
    return np.hstack([m_block, zero, s_block, t_block])


def high_mixing_matrix(ell: int) -> np.ndarray:
    """
    The 2*ell-row matrix V_ell (attributes by household types).

    Left half: [M|0|S|T] on top of ones; a single all-ones middle column;
    right half: ones on top of [M|0|S|T].
    """
    half = _half_block(ell)
    ones = np.ones_like(half)
    left = np.vstack([half, ones])
    middle = np.ones((2 * ell, 1), dtype=np.int64)
    right = np.vstack([ones, half])
    return np.hstack([left, middle, right])


def left_block_indices(ell: int) -> list[int]:
    """0-based indices of the M, zero and S columns of the left half."""
    return list(range(2 * ell + comb(ell, 2) - 1))


def cycle_block_indices(ell: int) -> list[int]:
    """0-based indices of the left M columns plus the left zero column."""
    return list(range(ell + comb(ell, 2) + 1))


def gen_high_mixing_family(ell: int) -> Instance:
    """
    Block built on V_ell with target 2*ell everywhere and a uniform target law.

    An all-ones household-count row with target 2*ell is appended, which
    keeps exactly the solutions of size 2*ell.
    """
    cap = get_limits_config().generators.high_mixing_max_ell
    if not 3 <= ell <= cap:
        raise ValueError(f"ell must lie in [3, {cap}], got {ell}")
    v = high_mixing_matrix(ell)
    n = v.shape[1]
    columns = np.vstack([v, np.ones((1, n), dtype=np.int64)]).T
    target = np.full(2 * ell + 1, 2 * ell, dtype=np.int64)
    return make_instance(
        columns,
        np.full(n, 1.0 / n),
        target,
        count_coord=2 * ell,
        uniform_target=True,
        name=f"high_mixing_{ell}",
    )
