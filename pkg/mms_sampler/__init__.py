"""
mms-sampler - Sampling household microdata consistent with block tabulations.

A block is a multiset-sum instance: household types (columns), a base
distribution over them, and a target attribute-sum vector. This package
decides, enumerates and samples exact solutions, analyzes the Markov chains
used for sampling, and evaluates statewide type frequencies.
"""

__version__ = "0.1.0"

from mms_sampler.batch import BlockStatus, RunManifest, run_batch
from mms_sampler.chains import Algorithm, ChainConfig, SampleReport, SeededRNG, StartRule
from mms_sampler.core import Instance, Solution, load_instance, make_instance, save_instance
from mms_sampler.enumeration import decide_mms, enumerate_exact, enumerate_top_n
from mms_sampler.sampler import BlockSampler

__all__ = [
    "__version__",
    "Algorithm",
    "BlockSampler",
    "BlockStatus",
    "ChainConfig",
    "Instance",
    "RunManifest",
    "SampleReport",
    "SeededRNG",
    "Solution",
    "StartRule",
    "decide_mms",
    "enumerate_exact",
    "enumerate_top_n",
    "load_instance",
    "make_instance",
    "run_batch",
    "save_instance",
]
