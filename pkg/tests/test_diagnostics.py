import math

import numpy as np
import pytest

from mms_sampler.chains import ChainConfig
from mms_sampler.config import get_limits_config
from mms_sampler.core import Solution
from mms_sampler.diagnostics import (
    KernelKind,
    build_kernel,
    conditioned_mixing_time,
    conditioning_tvd_bound,
    conductance_of_cut,
    connected_components,
    empirical_tvd,
    exact_posterior,
    histogram_tvd,
    kernel_components,
    mixing_bound_from_set,
    mixing_time_by_powers,
    mixing_times_by_powers,
    p_star_curve,
    second_eigenvalue,
    spectral_report,
    stationary,
    stationary_of_components,
    sub_multisets,
    verify_detailed_balance,
)
from mms_sampler.errors import (
    DisconnectedChainError,
    IncompleteEnumerationError,
    NonReversibleKernelError,
    StateSpaceTooLarge,
)
from mms_sampler.generators import gen_high_mixing_family, left_block_indices

from tests.conftest import B_DOUBLE, B_PAIR, D_ALL_MIXED, D_TRIPLE

EPS = 1 / (2 * math.e)


def kinds_for(inst):
    yield KernelKind.simple(0.5)
    yield KernelKind.simple(2.0)
    yield KernelKind.truncated(1.0, 2)
    for k in range(2, inst.m + 1):
        yield KernelKind.reduced(k)


def test_kernels_are_lazy_stochastic_and_reversible(small_random_instances):
    for inst in small_random_instances:
        for kind in kinds_for(inst):
            kernel = build_kernel(inst, kind)
            kernel.check()
            assert verify_detailed_balance(kernel) < 1e-12, kind.label()


def test_kernel_state_cap(small_random_instances):
    with pytest.raises(StateSpaceTooLarge):
        build_kernel(small_random_instances[0], KernelKind.simple(1.0), state_cap=1)


def test_sub_multisets():
    found = {tuple(z.tolist()) for z in sub_multisets(np.array([2, 0, 1]), 2)}
    assert found == {(2, 0, 0), (1, 0, 1)}


def test_block_b_swap_kernel(block_b):
    kernel = build_kernel(block_b, KernelKind.reduced(2))
    assert kernel.states == [B_DOUBLE, B_PAIR]
    assert np.allclose(kernel.dense(), [[5 / 6, 1 / 6], [1 / 3, 2 / 3]])
    assert np.allclose(stationary(kernel), [2 / 3, 1 / 3])
    assert second_eigenvalue(kernel) == pytest.approx(0.5)


def test_block_b_report_and_bounds(block_b):
    kernel = build_kernel(block_b, KernelKind.reduced(2))
    report = spectral_report(kernel, B_DOUBLE)
    assert report.connected
    assert report.tau_rel == pytest.approx(2.0)
    assert report.start_mass == pytest.approx(2 / 3)
    assert report.n_lower == pytest.approx(1.0)
    assert report.n_upper == pytest.approx(2 * (1 + math.log(3)))
    assert report.to_record()["kind"] == "reduced(k=2)"

    assert mixing_time_by_powers(kernel, B_DOUBLE) == 1
    assert mixing_time_by_powers(kernel, B_PAIR) == 2
    assert mixing_times_by_powers(kernel).tolist() == [1, 2]

    from_set = mixing_bound_from_set(kernel, [B_DOUBLE])
    assert from_set == pytest.approx(2 * (1 + 0.5 * math.log(1.5)))
    assert from_set < report.n_upper
    set_report = spectral_report(kernel, [B_DOUBLE])
    assert set_report.n_upper == pytest.approx(from_set)


def test_balance_against_wrong_target(block_b):
    kernel = build_kernel(block_b, KernelKind.reduced(2))
    uniform = np.zeros(kernel.size)
    assert verify_detailed_balance(kernel, uniform) == pytest.approx(1 / 12)
    with pytest.raises(NonReversibleKernelError):
        spectral_report(kernel, B_DOUBLE, log_weights=uniform)


def test_disconnected_block_kernels(disconnected):
    two = build_kernel(disconnected, KernelKind.reduced(2))
    assert two.states == [D_ALL_MIXED, D_TRIPLE]
    assert np.allclose(two.dense(), np.eye(2))
    report = spectral_report(two, D_TRIPLE)
    assert report.components == 2
    assert math.isinf(report.tau_rel)
    assert report.n_lower is None and report.n_upper is None
    with pytest.raises(DisconnectedChainError):
        mixing_bound_from_set(two, [D_TRIPLE])

    three = build_kernel(disconnected, KernelKind.reduced(3))
    dense = three.dense()
    assert dense[1, 0] == pytest.approx(1 / 14)
    assert dense[0, 1] == pytest.approx(3 / 7)
    assert second_eigenvalue(three) == pytest.approx(0.5)
    assert np.allclose(stationary(three), [1 / 7, 6 / 7])


def test_components(disconnected, hyperrectangles, small_random_instances):
    parts = connected_components(disconnected, 2)
    assert sorted(len(p) for p in parts) == [1, 1]
    assert len(connected_components(disconnected, 3)) == 1
    for inst in hyperrectangles:
        assert len(connected_components(inst, 2)) == 1
    for inst in small_random_instances:
        assert len(connected_components(inst, inst.m)) == 1


def test_limit_of_disconnected_chain(disconnected):
    two = build_kernel(disconnected, KernelKind.reduced(2))
    assert np.allclose(stationary_of_components(two, [0.5, 0.5]), [0.5, 0.5])
    three = build_kernel(disconnected, KernelKind.reduced(3))
    assert np.allclose(stationary_of_components(three, [1.0, 0.0]), [1 / 7, 6 / 7])


def test_single_coordinate_moves_cannot_leave_exact_states(block_b):
    kernel = build_kernel(block_b, KernelKind.truncated(1.0, 0))
    assert sorted(kernel.states) == [B_DOUBLE, B_PAIR]
    assert len(kernel_components(kernel)) == 2
    wider = build_kernel(block_b, KernelKind.truncated(1.0, 6))
    assert len(kernel_components(wider)) == 1


def reduced_sandwich(inst, k):
    kernel = build_kernel(inst, KernelKind.reduced(k))
    sigma = stationary(kernel)
    times = mixing_times_by_powers(kernel)
    assert (times >= 0).all()
    tau = 1.0 / (1.0 - second_eigenvalue(kernel))
    assert times.max() >= (tau - 1) * math.log(1 / (2 * EPS)) - 1e-9
    for a, x in enumerate(kernel.states):
        report = spectral_report(kernel, x)
        assert times[a] <= math.ceil(report.n_upper + 1e-9)
        assert report.n_upper == pytest.approx(tau * math.log(1 / (EPS * sigma[a])))


def test_swap_chain_iteration_bounds(hyperrectangles, small_random_instances, block_b):
    reduced_sandwich(block_b, 2)
    for inst in hyperrectangles:
        reduced_sandwich(inst, 2)
    for inst in small_random_instances:
        reduced_sandwich(inst, inst.m)


@pytest.mark.parametrize("gamma", [0.5, 1.0])
def test_simple_chain_iteration_bounds(block_b, gamma):
    kernel = build_kernel(block_b, KernelKind.simple(gamma))
    start = Solution.zeros(3)
    report = spectral_report(kernel, start)
    p_star = report.p_star
    assert 0 < p_star < 1
    tau = report.tau_rel
    eps_joint = 2 * p_star * EPS / 3

    times = mixing_times_by_powers(kernel, eps_joint)
    assert (times >= 0).all(), "some start did not mix within the power budget"
    worst = times.max()
    assert worst >= (tau - 1) * math.log(3 / (4 * EPS * p_star)) - 1e-9

    conditioned = conditioned_mixing_time(kernel, start)
    assert conditioned is not None
    start_mass = stationary(kernel)[kernel.index[start]]
    assert conditioned.tau_star <= math.ceil(
        tau * math.log(3 / (2 * EPS * p_star * start_mass)) + 1e-9
    )
    assert conditioned.exact_mass >= (1 - 2 * EPS / 3) * p_star - 1e-12
    assert conditioned.iterations == pytest.approx(conditioned.tau_star / conditioned.exact_mass)


def test_relaxation_time_grows_with_gamma(block_b):
    gammas = [0.0, 1.0, 2.0, 4.0]
    taus = [1.0 / (1.0 - second_eigenvalue(build_kernel(block_b, KernelKind.simple(g)))) for g in gammas]
    assert np.all(np.diff(taus) > 0)
    slope, _ = np.polyfit(gammas, np.log(taus), 1)
    assert slope > 0


def test_conditioned_mixing_needs_simple_kernel(block_b):
    kernel = build_kernel(block_b, KernelKind.reduced(2))
    with pytest.raises(ValueError):
        conditioned_mixing_time(kernel, B_DOUBLE)


def test_exact_mass_grows_with_gamma(block_b):
    curve = p_star_curve(block_b, [0.0, 0.5, 1.0, 2.0, 5.0, 50.0])
    masses = [mass for _, mass in curve]
    assert masses == sorted(masses)
    assert masses[-1] >= 0.99
    assert curve[0][0] == 0.0


def test_conditioning_bound():
    check = conditioning_tvd_bound([0.5, 0.5, 0.0], [0.25, 0.25, 0.5], [True, True, False])
    assert check.tvd_joint == pytest.approx(0.5)
    assert check.tvd_conditioned == pytest.approx(0.0)
    assert check.bound == pytest.approx(0.75)
    assert check.holds
    with pytest.raises(ValueError):
        conditioning_tvd_bound([0.0, 1.0], [0.5, 0.5], [True, False])


def test_conditioning_bound_along_the_chain(block_b):
    kernel = build_kernel(block_b, KernelKind.simple(1.0))
    sigma = stationary(kernel)
    mu = np.zeros(kernel.size)
    mu[kernel.index[Solution.zeros(3)]] = 1.0
    for _ in range(40):
        mu = kernel.rows.T @ mu
        if mu[kernel.exact].sum() > 0:
            assert conditioning_tvd_bound(sigma, mu, kernel.exact).holds


def test_cut_needs_small_mass(block_b):
    kernel = build_kernel(block_b, KernelKind.reduced(2))
    with pytest.raises(ValueError):
        conductance_of_cut(kernel, [B_DOUBLE])
    cut = conductance_of_cut(kernel, [B_PAIR])
    assert cut.phi == pytest.approx(1 / 3)
    assert second_eigenvalue(kernel) >= cut.cheeger_bound


@pytest.mark.slow
@pytest.mark.parametrize("ell, min_left, min_tau", [(3, 5, 2.5), (4, 17, 8.5)])
def test_high_mixing_family_has_a_bottleneck(ell, min_left, min_tau):
    kernel = build_kernel(gen_high_mixing_family(ell), KernelKind.reduced(2))
    assert len(kernel_components(kernel)) == 1
    left = set(left_block_indices(ell))
    left_states = [x for x in kernel.states if set(x.support()) <= left]
    assert len(left_states) >= min_left
    cut = conductance_of_cut(kernel, left_states)
    assert cut.phi <= 1 / len(left_states) + 1e-12
    lam = second_eigenvalue(kernel)
    assert lam >= cut.cheeger_bound - 1e-9
    assert 1 / (1 - lam) >= min_tau


def test_exact_posterior(block_b, disconnected):
    post = exact_posterior(block_b)
    assert post.prob(B_PAIR) == pytest.approx(1 / 3)
    assert post.prob(B_DOUBLE) == pytest.approx(2 / 3)
    assert post.prob(Solution.of([0, 1, 0])) == 0.0
    with pytest.raises(IncompleteEnumerationError):
        exact_posterior(disconnected, limit=1)
    with pytest.raises(IncompleteEnumerationError):
        exact_posterior(disconnected.with_target([3, 0, 0, 2]))


def test_histogram_tvd_counts_outside_mass(block_b):
    post = exact_posterior(block_b)
    assert histogram_tvd([B_DOUBLE, B_DOUBLE, B_PAIR], post) == pytest.approx(0.0)
    assert histogram_tvd([B_DOUBLE, Solution.of([0, 1, 0])], post) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        histogram_tvd([], post)


def test_zero_step_swap_chain_stays_at_start(block_b):
    post = exact_posterior(block_b)
    cfg = ChainConfig(algorithm="reduced", t=0, seed=11)
    assert empirical_tvd(block_b, cfg, post, 200) == pytest.approx(1 / 3)


@pytest.mark.slow
def test_swap_chain_reaches_posterior(block_b):
    post = exact_posterior(block_b)
    cfg = ChainConfig(algorithm="reduced", t=10, seed=11)
    assert empirical_tvd(block_b, cfg, post, 4000, start=B_PAIR) < 0.03


def test_default_epsilon():
    assert get_limits_config().diagnostics.epsilon == pytest.approx(EPS)
