"""Statewide type frequencies, distances and reweighting."""

from mms_sampler.evaluation.frequencies import (
    WEIGHTINGS,
    TvdSummary,
    empirical_frequencies_qhat,
    expected_frequencies_q,
    pums_frequencies_p,
    summarize_tvds,
    tvd,
)
from mms_sampler.evaluation.projection import (
    TypeDistribution,
    TypeLabel,
    TypeProjection,
    format_label,
    parse_label,
)
from mms_sampler.evaluation.reweighting import reweight_lambda, reweight_partition

__all__ = [
    "WEIGHTINGS",
    "TvdSummary",
    "empirical_frequencies_qhat",
    "expected_frequencies_q",
    "pums_frequencies_p",
    "summarize_tvds",
    "tvd",
    "TypeDistribution",
    "TypeLabel",
    "TypeProjection",
    "format_label",
    "parse_label",
    "reweight_lambda",
    "reweight_partition",
]
