import logging

import numpy as np
import pytest

from mms_sampler import BlockSampler
from mms_sampler.chains import (
    Algorithm,
    ChainConfig,
    SeededRNG,
    StartRule,
    derive_seed,
    hybrid_sample,
    reduced_chain_sample,
    reduced_chain_step,
    rejection_sample,
    resample_log_weights,
    simple_chain_sample,
    simple_chain_step,
    truncated_simple_sample,
    truncated_simple_step,
)
from mms_sampler.config import get_limits_config
from mms_sampler.core import Solution, is_exact, is_feasible, log_f, residual_norm
from mms_sampler.diagnostics import KernelKind, build_kernel
from mms_sampler.enumeration import enumerate_exact
from mms_sampler.errors import ConfigError, InfeasibleSolutionError, RestartCapExceeded

from tests.conftest import B_DOUBLE, B_PAIR


@pytest.mark.parametrize(
    "kwargs, message",
    [
        ({"seed": None}, "seed"),
        ({"k": 1}, "k must be"),
        ({"t": -1}, "t must be"),
        ({"top_n": 0}, "top_n"),
        ({"omega": -2}, "omega"),
        ({"max_restarts": 0}, "max_restarts"),
    ],
)
def test_config_validation(kwargs, message):
    kwargs = {"seed": 1, **kwargs}
    with pytest.raises(ConfigError, match=message):
        ChainConfig(**kwargs)


def test_config_defaults_follow_limits():
    limits = get_limits_config().chains
    cfg = ChainConfig(algorithm="rejection", seed=3)
    assert cfg.algorithm is Algorithm.REJECTION
    assert cfg.max_restarts == limits.rejection_max_restarts
    assert ChainConfig(algorithm="simple", seed=3).max_restarts == limits.simple_max_restarts
    assert ChainConfig(seed=3, start="best").start is StartRule.BEST
    assert ChainConfig(seed=3).snapshot()["algorithm"] == "hybrid"


def test_derived_seeds_are_stable():
    assert derive_seed(42, "block_B") == derive_seed(42, "block_B")
    assert derive_seed(42, "block_B") != derive_seed(42, "block_C")
    a, b = SeededRNG(5), SeededRNG(5)
    assert [a.integers(100) for _ in range(5)] == [b.integers(100) for _ in range(5)]


def test_gumbel_argmax_skips_zero_weight():
    rng = SeededRNG(0)
    weights = np.array([-np.inf, 0.0, -np.inf])
    assert {rng.gumbel_argmax(weights) for _ in range(50)} == {1}


@pytest.mark.parametrize("gamma", [0.0, 0.7, 3.0])
def test_resample_weights_match_target(small_random_instances, gamma):
    for inst in small_random_instances:
        x = np.zeros(inst.num_types_n, dtype=np.int64)
        for i in inst.eligible:
            log_w = resample_log_weights(inst, gamma, x, int(i))
            expected = []
            for g in range(log_w.size):
                y = x.copy()
                y[i] = g
                assert is_feasible(inst, y)
                expected.append(log_f(inst, y) - gamma * residual_norm(inst, y))
            expected = np.asarray(expected)
            assert np.allclose(log_w - log_w[0], expected - expected[0])


def test_truncated_weights_drop_far_states(block_b):
    log_w = resample_log_weights(block_b, 1.0, np.zeros(3, dtype=np.int64), 1, omega=0)
    # only two mixed households reach the target
    assert np.isinf(log_w[:2]).all()
    assert np.isfinite(log_w[2])


def test_simple_step_rejects_infeasible(block_b):
    with pytest.raises(InfeasibleSolutionError):
        simple_chain_step(block_b, 1.0, [0, 3, 0], SeededRNG(0))
    with pytest.raises(InfeasibleSolutionError):
        truncated_simple_step(block_b, 1.0, 0, [0, 1, 0], SeededRNG(0))


def test_simple_steps_stay_feasible(block_b):
    rng = SeededRNG(2)
    x = [0, 0, 0]
    for _ in range(200):
        x = simple_chain_step(block_b, 1.0, x, rng)
        assert is_feasible(block_b, x)


def test_truncated_steps_stay_exact_with_zero_slack(block_b):
    rng = SeededRNG(3)
    x = B_PAIR
    for _ in range(100):
        x = truncated_simple_step(block_b, 2.0, 0, x, rng)
        assert is_exact(block_b, x)


def test_reduced_steps_stay_exact(high_mixing_3):
    rng = SeededRNG(4)
    (x,) = enumerate_exact(high_mixing_3, 1).solutions
    for _ in range(150):
        x = reduced_chain_step(high_mixing_3, 2, x, rng)
        assert is_exact(high_mixing_3, x)


def test_reduced_step_needs_exact_start(block_b):
    with pytest.raises(InfeasibleSolutionError):
        reduced_chain_step(block_b, 2, [0, 1, 0], SeededRNG(0))


def test_reduced_step_is_noop_for_small_blocks(example1_blocks, caplog):
    block_a = example1_blocks[0]
    with caplog.at_level(logging.WARNING):
        x = reduced_chain_step(block_a, 2, [1, 0, 0], SeededRNG(0))
    assert x.multiplicities == (1, 0, 0)
    assert "fewer than k=2" in caplog.text
    report = reduced_chain_sample(block_a, ChainConfig(algorithm="reduced", seed=1, t=10), [1, 0, 0])
    assert report.solution.multiplicities == (1, 0, 0)
    assert report.iterations_used == 0


def test_rejection_acceptance_rate(block_b, chain_config):
    cfg = chain_config(algorithm="rejection")
    rng = SeededRNG(cfg.seed)
    reports = [rejection_sample(block_b, cfg, rng) for _ in range(4000)]
    assert all(r.accepted and is_exact(block_b, r.solution) for r in reports)
    # acceptance probability 3/8, so 5/3 rejected rounds per sample on average
    assert np.mean([r.restarts for r in reports]) == pytest.approx(5 / 3, abs=0.15)
    share = np.mean([r.solution == B_DOUBLE for r in reports])
    assert share == pytest.approx(2 / 3, abs=0.03)


def test_rejection_gives_up(disconnected, chain_config):
    inst = disconnected.with_target([3, 0, 0, 2])
    with pytest.raises(RestartCapExceeded):
        rejection_sample(inst, chain_config(algorithm="rejection", max_restarts=50))


def test_simple_chain_gives_up_without_steps(block_b, chain_config):
    cfg = chain_config(algorithm="simple", t=0, max_restarts=3)
    with pytest.raises(RestartCapExceeded):
        simple_chain_sample(block_b, cfg)


def test_truncated_chain_needs_start_inside(block_b, chain_config):
    cfg = chain_config(algorithm="truncated_simple", t=5, omega=0)
    with pytest.raises(InfeasibleSolutionError):
        truncated_simple_sample(block_b, cfg, [0, 1, 0])
    report = truncated_simple_sample(block_b, cfg, B_PAIR)
    assert report.algorithm is Algorithm.TRUNCATED_SIMPLE
    assert is_exact(block_b, report.solution)


def test_hybrid_exact_mode(block_b, chain_config):
    report = hybrid_sample(block_b, chain_config(top_n=5, t=100))
    assert report.exact_mode
    assert report.iterations_used == 0
    assert report.solution in (B_PAIR, B_DOUBLE)


def test_hybrid_continues_with_swaps(block_b, chain_config):
    report = hybrid_sample(block_b, chain_config(top_n=1, t=10))
    assert not report.exact_mode
    assert report.start_state == B_DOUBLE
    assert report.iterations_used == 10
    assert is_exact(block_b, report.solution)


def test_hybrid_rejects_empty_block(disconnected, chain_config):
    with pytest.raises(InfeasibleSolutionError):
        hybrid_sample(disconnected.with_target([3, 0, 0, 2]), chain_config())


@pytest.mark.parametrize("algorithm", ["rejection", "simple", "reduced", "hybrid", "truncated_simple"])
def test_block_sampler_is_reproducible(block_b, chain_config, algorithm):
    cfg = chain_config(algorithm=algorithm, t=20, gamma=2.0, top_n=1)
    first = [r.to_record() for r in BlockSampler(block_b, cfg).run(20)]
    second = [r.to_record() for r in BlockSampler(block_b, cfg).run(20)]
    assert first == second
    assert all(is_exact(block_b, r["x"]) for r in first)


def test_block_sampler_reset_and_progress(block_b, chain_config):
    sampler = BlockSampler(block_b, chain_config(algorithm="reduced", t=5))
    messages = []
    sampler.progress.add_callback(messages.append)
    first = sampler.sample()
    sampler.reset()
    again = sampler.sample()
    assert first.solution == again.solution
    assert len(messages) == 2
    assert messages[0].startswith("sample 1:")
    assert sampler.start_state == B_DOUBLE


def test_rejection_sampler_has_no_step(block_b, chain_config):
    with pytest.raises(ValueError):
        BlockSampler(block_b, chain_config(algorithm="rejection")).step(B_PAIR)


@pytest.mark.slow
def test_reduced_chain_frequencies(block_b, chain_config):
    reports = BlockSampler(block_b, chain_config(algorithm="reduced", t=20)).run(4000)
    share = np.mean([r.solution == B_DOUBLE for r in reports])
    assert share == pytest.approx(2 / 3, abs=0.03)


@pytest.mark.slow
def test_simple_chain_frequencies(block_b, chain_config):
    # Accepted rounds follow the t-step law from the empty multiset, conditioned on exactness
    gamma, t, trials = 3.0, 60, 3000
    kernel = build_kernel(block_b, KernelKind.simple(gamma))
    law = np.linalg.matrix_power(kernel.dense(), t)[kernel.index[Solution.zeros(3)]]
    exact = np.asarray(kernel.exact, dtype=bool)
    expected = law[kernel.index[B_DOUBLE]] / law[exact].sum()

    reports = BlockSampler(block_b, chain_config(algorithm="simple", gamma=gamma, t=t)).run(trials)
    share = np.mean([r.solution == B_DOUBLE for r in reports])
    sigma = np.sqrt(expected * (1 - expected) / trials)
    assert share == pytest.approx(expected, abs=5 * sigma)


@pytest.mark.slow
@pytest.mark.parametrize("start", [B_PAIR, B_DOUBLE])
def test_reduced_steps_follow_kernel(block_b, chain_config, start):
    kernel = build_kernel(block_b, KernelKind.reduced(2))
    expected = kernel.dense()[kernel.index[start]]
    sampler = BlockSampler(block_b, chain_config(algorithm="reduced"))
    trials = 4000
    hits = np.zeros(kernel.size)
    for _ in range(trials):
        hits[kernel.index[sampler.step(start)]] += 1
    sigma = np.sqrt(expected * (1 - expected) / trials)
    assert (np.abs(hits / trials - expected) <= 4 * sigma + 1e-12).all()
