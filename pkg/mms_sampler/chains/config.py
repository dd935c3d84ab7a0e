"""Sampler configuration and per-sample reports."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from mms_sampler.config import get_limits_config
from mms_sampler.core.instance import Solution
from mms_sampler.errors import ConfigError


class Algorithm(Enum):
    """The available samplers."""

    REJECTION = "rejection"
    SIMPLE = "simple"
    REDUCED = "reduced"
    HYBRID = "hybrid"
    TRUNCATED_SIMPLE = "truncated_simple"


class StartRule(Enum):
    """How the hybrid sampler picks its MCMC start state from the top-N set."""

    POSTERIOR = "posterior"  # draw from pi restricted to the set
    BEST = "best"  # the f-maximizer of the set


@dataclass
class ChainConfig:
    """
    Configuration for one sampler run.

    Args:
        algorithm: Which sampler to run.
        gamma: Inverse temperature of the residual penalty (simple chains).
        k: Swap size (reduced and hybrid chains).
        t: MCMC iterations per sample (or per restart round).
        top_n: Size of the enumerated start set (hybrid).
        omega: Residual slack allowed by the truncated simple chain.
        seed: 64-bit seed; required so runs are reproducible.
        max_restarts: Round cap for rejection-style samplers; defaults come
            from the global limits config.
        start: Start rule for the hybrid sampler.
    """

    algorithm: Algorithm = Algorithm.HYBRID
    gamma: float = 1.0
    k: int = 2
    t: int = 0
    top_n: int = 5000
    omega: int = 0
    seed: int | None = None
    max_restarts: int | None = None
    start: StartRule = StartRule.POSTERIOR

    def __post_init__(self):
        if isinstance(self.algorithm, str):
            self.algorithm = Algorithm(self.algorithm)
        if isinstance(self.start, str):
            self.start = StartRule(self.start)
        if self.seed is None:
            raise ConfigError("an explicit seed is required")
        if self.k < 2:
            raise ConfigError(f"k must be at least 2, got {self.k}")
        if self.t < 0:
            raise ConfigError(f"t must be nonnegative, got {self.t}")
        if self.top_n < 1:
            raise ConfigError(f"top_n must be positive, got {self.top_n}")
        if self.omega < 0:
            raise ConfigError(f"omega must be nonnegative, got {self.omega}")
        if self.max_restarts is None:
            limits = get_limits_config().chains
            self.max_restarts = (
                limits.rejection_max_restarts
                if self.algorithm is Algorithm.REJECTION
                else limits.simple_max_restarts
            )
        if self.max_restarts < 1:
            raise ConfigError("max_restarts must be positive")

    def snapshot(self) -> dict[str, Any]:
        return {
            "algorithm": self.algorithm.value,
            "gamma": self.gamma,
            "k": self.k,
            "t": self.t,
            "top_n": self.top_n,
            "omega": self.omega,
            "seed": self.seed,
            "max_restarts": self.max_restarts,
            "start": self.start.value,
        }


@dataclass
class SampleReport:
    """Result of drawing one sample."""

    solution: Solution
    iterations_used: int
    restarts: int
    accepted: bool
    rng_seed: int
    algorithm: Algorithm
    start_state: Solution | None = None
    exact_mode: bool = False

    def to_record(self) -> dict[str, Any]:
        return {
            "x": list(self.solution.multiplicities),
            "iterations_used": self.iterations_used,
            "restarts": self.restarts,
            "accepted": self.accepted,
            "rng_seed": self.rng_seed,
            "algorithm": self.algorithm.value,
            "start_state": None
            if self.start_state is None
            else list(self.start_state.multiplicities),
            "exact_mode": self.exact_mode,
        }
