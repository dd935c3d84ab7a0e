"""Explicit-kernel analysis for small blocks."""

from mms_sampler.diagnostics.kernels import (
    KernelKind,
    KernelMatrix,
    build_kernel,
    state_log_target,
    sub_multisets,
)
from mms_sampler.diagnostics.posterior import (
    Posterior,
    connected_components,
    empirical_tvd,
    exact_posterior,
    histogram_tvd,
    p_star_curve,
)
from mms_sampler.diagnostics.spectral import (
    ConditionedMixing,
    ConditioningCheck,
    CutReport,
    SpectralReport,
    conditioned_mixing_time,
    conditioning_tvd_bound,
    conductance_of_cut,
    kernel_components,
    mixing_bound_from_set,
    mixing_time_by_powers,
    mixing_times_by_powers,
    reduced_chain_bounds,
    second_eigenvalue,
    simple_chain_bounds,
    spectral_report,
    stationary,
    stationary_of_components,
    verify_detailed_balance,
)

__all__ = [
    "KernelKind",
    "KernelMatrix",
    "build_kernel",
    "state_log_target",
    "sub_multisets",
    "Posterior",
    "connected_components",
    "empirical_tvd",
    "exact_posterior",
    "histogram_tvd",
    "p_star_curve",
    "ConditionedMixing",
    "ConditioningCheck",
    "CutReport",
    "SpectralReport",
    "conditioned_mixing_time",
    "conditioning_tvd_bound",
    "conductance_of_cut",
    "kernel_components",
    "mixing_bound_from_set",
    "mixing_time_by_powers",
    "mixing_times_by_powers",
    "reduced_chain_bounds",
    "second_eigenvalue",
    "simple_chain_bounds",
    "spectral_report",
    "stationary",
    "stationary_of_components",
    "verify_detailed_balance",
]
