"""Samplers for exact block solutions."""

from mms_sampler.chains.config import Algorithm, ChainConfig, SampleReport, StartRule
from mms_sampler.chains.hybrid import exact_sample, hybrid_sample, solution_log_weights
from mms_sampler.chains.reduced import reduced_chain_sample, reduced_chain_step
from mms_sampler.chains.rejection import rejection_sample
from mms_sampler.chains.rng import SeededRNG, derive_seed, ephemeral_seed, stable_hash64
from mms_sampler.chains.simple import (
    resample_log_weights,
    simple_chain_sample,
    simple_chain_step,
    truncated_simple_sample,
    truncated_simple_step,
)

__all__ = [
    "Algorithm",
    "ChainConfig",
    "SampleReport",
    "StartRule",
    "SeededRNG",
    "derive_seed",
    "ephemeral_seed",
    "stable_hash64",
    "rejection_sample",
    "simple_chain_step",
    "simple_chain_sample",
    "truncated_simple_step",
    "truncated_simple_sample",
    "resample_log_weights",
    "reduced_chain_step",
    "reduced_chain_sample",
    "hybrid_sample",
    "exact_sample",
    "solution_log_weights",
]
