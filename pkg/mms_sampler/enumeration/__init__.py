"""Exact combinatorial engine: decision, enumeration, top-N and swap classes."""

from mms_sampler.enumeration.search import (
    MultisetSearch,
    SolutionSet,
    TopNSearch,
    best_first_order,
    best_start_state,
    count_feasible,
    decide_mms,
    enumerate_exact,
    enumerate_feasible,
    enumerate_top_n,
)
from mms_sampler.enumeration.swaps import SwapCache, SwapKey, enumerate_swaps

__all__ = [
    "MultisetSearch",
    "SolutionSet",
    "TopNSearch",
    "best_first_order",
    "best_start_state",
    "count_feasible",
    "decide_mms",
    "enumerate_exact",
    "enumerate_feasible",
    "enumerate_top_n",
    "SwapCache",
    "SwapKey",
    "enumerate_swaps",
]
