import logging

import numpy as np
import pytest

from mms_sampler.errors import ConfigError, IncompleteEnumerationError, InfeasibleSolutionError
from mms_sampler.evaluation import (
    TypeDistribution,
    TypeProjection,
    empirical_frequencies_qhat,
    expected_frequencies_q,
    format_label,
    parse_label,
    pums_frequencies_p,
    reweight_lambda,
    reweight_partition,
    summarize_tvds,
    tvd,
)
from mms_sampler.generators import gen_example1

from tests.conftest import B_DOUBLE, B_PAIR

BLACK, MIXED, WHITE = (0, 2), (1, 1), (2, 0)


@pytest.fixture
def projection(block_b):
    return TypeProjection.from_preset(block_b, "example1")


def weights(dist):
    return [dist.get(label) for label in (BLACK, MIXED, WHITE)]


def test_projection_from_attributes(block_b, projection):
    assert projection.labels == (BLACK, MIXED, WHITE)
    assert TypeProjection.from_attributes(block_b, ["households"]).distinct_labels() == [(1,)]
    with pytest.raises(ConfigError, match="unknown attributes"):
        TypeProjection.from_attributes(block_b, ["income"])
    with pytest.raises(ConfigError, match="preset"):
        TypeProjection.from_preset(block_b, "nope")


def test_projection_shapes(disconnected):
    with pytest.raises(ConfigError):
        TypeProjection.from_attributes(disconnected, ["households"])
    with pytest.raises(ConfigError):
        TypeProjection.identity(3).check(disconnected)
    assert TypeProjection.constant(4).distinct_labels() == [(0,)]
    assert TypeProjection.from_table([0, 1, 1, 2]).aggregate([1, 2, 3, 4]) == {
        (0,): [1.0],
        (1,): [2.0, 3.0],
        (2,): [4.0],
    }


def test_labels_round_trip():
    assert format_label((2, 0)) == "2-0"
    assert parse_label("2-0") == (2, 0)


def test_type_distribution_validation():
    with pytest.raises(ValueError):
        TypeDistribution({(0,): 0.7, (1,): 0.7})
    with pytest.raises(ValueError):
        TypeDistribution({(0,): 1.2, (1,): -0.2})
    dist = TypeDistribution({(0,): 0.25, (1,): 0.75})
    assert dist.class_masses({(0,): "a", (1,): "a"}) == {"a": 1.0}
    assert dist.to_rows() == [("0", 0.25), ("1", 0.75)]


def test_base_frequencies(block_b, projection):
    p = pums_frequencies_p(block_b.probs, projection)
    assert weights(p) == pytest.approx([0.25, 0.5, 0.25])
    with pytest.raises(ValueError):
        pums_frequencies_p([0.5, 0.5], projection)


def test_toy_state_frequencies(example1_blocks, projection):
    pooled = expected_frequencies_q(example1_blocks, projection)
    assert weights(pooled) == pytest.approx([1 / 3, 1 / 3, 1 / 3])
    per_block = expected_frequencies_q(example1_blocks, projection, weighting="block")
    assert weights(per_block) == pytest.approx([7 / 18, 2 / 9, 7 / 18])
    with pytest.raises(ValueError):
        expected_frequencies_q(example1_blocks, projection, weighting="person")


def test_sampled_frequencies(example1_blocks, projection):
    block_a, block_b, block_c = example1_blocks
    mixed = [(block_a, [1, 0, 0]), (block_b, B_DOUBLE), (block_c, [0, 0, 1])]
    single = [(block_a, [1, 0, 0]), (block_b, B_PAIR), (block_c, [0, 0, 1])]
    p = pums_frequencies_p(block_b.probs, projection)

    qhat = empirical_frequencies_qhat(mixed, projection)
    assert weights(qhat) == pytest.approx([0.25, 0.5, 0.25])
    assert tvd(p, qhat) == pytest.approx(0.0)

    qhat = empirical_frequencies_qhat(single, projection)
    assert weights(qhat) == pytest.approx([0.5, 0.0, 0.5])
    assert tvd(p, qhat) == pytest.approx(0.5)

    qhat = empirical_frequencies_qhat(mixed, projection, weighting="block")
    assert weights(qhat) == pytest.approx([1 / 3, 1 / 3, 1 / 3])


def test_sampled_frequencies_reject_inexact(block_b, projection):
    with pytest.raises(InfeasibleSolutionError):
        empirical_frequencies_qhat([(block_b, [0, 1, 0])], projection)


def test_empty_blocks_are_skipped(block_b, projection, caplog):
    empty = block_b.with_target([0, 0, 0])
    with caplog.at_level(logging.WARNING):
        qhat = empirical_frequencies_qhat([(empty, [0, 0, 0]), (block_b, B_DOUBLE)], projection)
    assert weights(qhat) == pytest.approx([0.0, 1.0, 0.0])
    assert "no households" in caplog.text
    with pytest.raises(ValueError, match="no usable blocks"):
        empirical_frequencies_qhat([(empty, [0, 0, 0])], projection)


def test_expected_frequencies_need_full_enumeration(example1_blocks, projection):
    with pytest.raises(IncompleteEnumerationError, match="empirical_frequencies_qhat"):
        expected_frequencies_q(example1_blocks, projection, limit=1)


def test_tvd_is_a_metric():
    a = TypeDistribution({(0,): 0.5, (1,): 0.5})
    b = TypeDistribution({(1,): 0.25, (2,): 0.75})
    c = TypeDistribution({(0,): 1.0})
    assert tvd(a, a) == 0.0
    assert tvd(a, b) == pytest.approx(tvd(b, a))
    assert tvd(a, b) == pytest.approx(0.75)
    assert tvd(a, c) <= tvd(a, b) + tvd(b, c) + 1e-12


def test_summarize_tvds():
    summary = summarize_tvds([0.1, 0.3, 0.2])
    assert summary.mean == pytest.approx(0.2)
    assert summary.max == 0.3
    assert summary.count == 3
    with pytest.raises(ValueError):
        summarize_tvds([])


def test_lambda_reweighting_limits(block_b, projection):
    p = pums_frequencies_p(block_b.probs, projection)
    assert np.allclose(reweight_lambda(block_b.probs, projection, p, p), block_b.probs)
    skewed = TypeDistribution({BLACK: 0.5, MIXED: 0.0, WHITE: 0.5})
    boosted = reweight_lambda(block_b.probs, projection, p, skewed, lam=1e-3)
    assert boosted[1] > block_b.probs[1]
    assert boosted.sum() == pytest.approx(1.0)
    flat = reweight_lambda(block_b.probs, projection, p, skewed, lam=1e6)
    assert np.allclose(flat, block_b.probs, atol=1e-5)
    with pytest.raises(ValueError):
        reweight_lambda(block_b.probs, projection, p, skewed, lam=0.0)


def reweighted_tvd(blocks, projection, weighting):
    p = pums_frequencies_p(blocks[0].probs, projection)
    q = expected_frequencies_q(blocks, projection, weighting)
    probs = reweight_lambda(blocks[0].probs, projection, p, q, lam=1e-3)
    q_new = expected_frequencies_q([b.with_probs(probs) for b in blocks], projection, weighting)
    return tvd(p, q), tvd(p, q_new)


def test_reweighting_single_toy_state(example1_blocks, projection):
    before, after = reweighted_tvd(example1_blocks, projection, "household")
    assert before == pytest.approx(1 / 6)
    assert after == pytest.approx(1 / 18, abs=2e-3)


@pytest.mark.parametrize(
    "weighting, before, after",
    [("household", 1 / 30, 13 / 810), ("block", 1 / 18, 1 / 198)],
)
def test_reweighting_larger_family(projection, weighting, before, after):
    blocks = gen_example1(b_copies=4)
    got_before, got_after = reweighted_tvd(blocks, projection, weighting)
    assert got_before == pytest.approx(before)
    assert got_after == pytest.approx(after, abs=2e-3)
    assert got_after < got_before


def test_partition_reweighting(block_b, projection):
    p = pums_frequencies_p(block_b.probs, projection)
    qhat = TypeDistribution({BLACK: 0.5, MIXED: 0.0, WHITE: 0.5})
    by_race = {BLACK: "single", WHITE: "single", MIXED: "mixed"}
    p_tilde = reweight_partition(p, qhat, by_race)
    assert weights(p_tilde) == pytest.approx([0.5, 0.0, 0.5])
    assert tvd(p_tilde, qhat) == pytest.approx(0.0)

    one_class = {label: 0 for label in (BLACK, MIXED, WHITE)}
    assert weights(reweight_partition(p, qhat, one_class)) == pytest.approx(weights(p))

    with pytest.raises(ValueError, match="without a class"):
        reweight_partition(p, qhat, {BLACK: 0, WHITE: 0})


def test_partition_needs_base_mass():
    p = TypeDistribution({(0,): 1.0, (1,): 0.0})
    qhat = TypeDistribution({(0,): 0.5, (1,): 0.5})
    with pytest.raises(ValueError, match="no base mass"):
        reweight_partition(p, qhat, {(0,): "a", (1,): "b"})
