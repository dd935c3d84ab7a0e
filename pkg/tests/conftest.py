"""Shared fixtures: the worked example blocks and small random instances."""

import pytest

from mms_sampler.chains import ChainConfig
from mms_sampler.core import Solution
from mms_sampler.generators import (
    gen_disconnected_example,
    gen_example1,
    gen_high_mixing_family,
    gen_hyperrectangle,
    gen_random,
)

# Block B solutions: one household of each single-race type, or two mixed households
B_PAIR = Solution.of([1, 0, 1])
B_DOUBLE = Solution.of([0, 2, 0])

# The two exact solutions of the disconnected block
D_TRIPLE = Solution.of([1, 1, 1, 0])
D_ALL_MIXED = Solution.of([0, 0, 0, 3])


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: statistical tests with many samples")


@pytest.fixture
def example1_blocks():
    return gen_example1()


@pytest.fixture
def block_b(example1_blocks):
    return example1_blocks[1]


@pytest.fixture
def disconnected():
    return gen_disconnected_example()


@pytest.fixture(scope="session")
def high_mixing_3():
    return gen_high_mixing_family(3)


@pytest.fixture
def small_random_instances():
    """Instances small enough for explicit kernels over Y."""
    return [gen_random(seed, n=4, d=3, m=3, name=f"random_{seed}") for seed in range(5)]


@pytest.fixture
def hyperrectangles():
    return [
        gen_hyperrectangle([(0, 1), (0, 1)], m=3, seed=seed, name=f"rect_{seed}")
        for seed in range(4)
    ]


@pytest.fixture
def chain_config():
    def make(**kwargs):
        kwargs.setdefault("seed", 7)
        return ChainConfig(**kwargs)

    return make
