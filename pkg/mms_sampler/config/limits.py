"""Limits and numeric defaults for mms-sampler.

Every cap that turns a runaway computation into an explicit error lives
here. Users can change values at runtime through update_limits_config()
or by setting MMS_SAMPLER_* environment variables before import.
"""

import math
import os
from dataclasses import dataclass


@dataclass
class EnumerationLimits:
    """Budgets for the branch-and-bound engine."""

    node_budget: int = 10_000_000  # Node expansions per enumeration call

    def __post_init__(self):
        """Load values from environment variables if present."""
        self.node_budget = int(
            os.getenv("MMS_SAMPLER_NODE_BUDGET", self.node_budget)
        )


@dataclass
class ChainLimits:
    """Restart caps for the rejection-style samplers."""

    rejection_max_restarts: int = 1_000_000  # Rounds of i.i.d. household draws
    simple_max_restarts: int = 1_000  # Rounds of the simple-chain wrapper

    def __post_init__(self):
        """Load values from environment variables if present."""
        self.rejection_max_restarts = int(
            os.getenv("MMS_SAMPLER_REJECTION_MAX_RESTARTS", self.rejection_max_restarts)
        )
        self.simple_max_restarts = int(
            os.getenv("MMS_SAMPLER_SIMPLE_MAX_RESTARTS", self.simple_max_restarts)
        )


@dataclass
class DiagnosticsLimits:
    """State caps and tolerances for explicit-kernel analysis."""

    simple_state_cap: int = 200_000  # |Y| above this refuses to build P_gamma
    reduced_state_cap: int = 50_000  # |X| above this refuses to build P_k
    dense_eigen_limit: int = 4_000  # Larger kernels use a sparse Lanczos solve
    epsilon: float = 1.0 / (2.0 * math.e)
    balance_tolerance: float = 1e-10

    def __post_init__(self):
        """Load values from environment variables if present."""
        self.simple_state_cap = int(
            os.getenv("MMS_SAMPLER_SIMPLE_STATE_CAP", self.simple_state_cap)
        )
        self.reduced_state_cap = int(
            os.getenv("MMS_SAMPLER_REDUCED_STATE_CAP", self.reduced_state_cap)
        )
        self.dense_eigen_limit = int(
            os.getenv("MMS_SAMPLER_DENSE_EIGEN_LIMIT", self.dense_eigen_limit)
        )
        self.epsilon = float(os.getenv("MMS_SAMPLER_EPSILON", self.epsilon))
        self.balance_tolerance = float(
            os.getenv("MMS_SAMPLER_BALANCE_TOLERANCE", self.balance_tolerance)
        )


@dataclass
class GeneratorLimits:
    """Defaults for the synthetic instance generators."""

    entry_max: int = 4  # Column entries are drawn from {0..entry_max}
    dirichlet_concentration: float = 1.0
    hyperrectangle_cap: int = 10_000  # Lattice points per hyperrectangle
    high_mixing_max_ell: int = 5
    distinct_column_attempts: int = 100  # Draw attempts per requested column

    def __post_init__(self):
        """Load values from environment variables if present."""
        self.entry_max = int(os.getenv("MMS_SAMPLER_ENTRY_MAX", self.entry_max))
        self.dirichlet_concentration = float(
            os.getenv(
                "MMS_SAMPLER_DIRICHLET_CONCENTRATION", self.dirichlet_concentration
            )
        )
        self.hyperrectangle_cap = int(
            os.getenv("MMS_SAMPLER_HYPERRECTANGLE_CAP", self.hyperrectangle_cap)
        )
        self.high_mixing_max_ell = int(
            os.getenv("MMS_SAMPLER_HIGH_MIXING_MAX_ELL", self.high_mixing_max_ell)
        )


@dataclass
class EvaluationDefaults:
    """Defaults for the statewide evaluation step."""

    reweight_lambda: float = 1e-3

    def __post_init__(self):
        """Load values from environment variables if present."""
        self.reweight_lambda = float(
            os.getenv("MMS_SAMPLER_REWEIGHT_LAMBDA", self.reweight_lambda)
        )


@dataclass
class LimitsConfig:
    """Master configuration combining all limit settings."""

    enumeration: EnumerationLimits
    chains: ChainLimits
    diagnostics: DiagnosticsLimits
    generators: GeneratorLimits
    evaluation: EvaluationDefaults

    def __init__(self):
        """Initialize all limit configurations."""
        self.enumeration = EnumerationLimits()
        self.chains = ChainLimits()
        self.diagnostics = DiagnosticsLimits()
        self.generators = GeneratorLimits()
        self.evaluation = EvaluationDefaults()


# Global limits configuration instance
LIMITS_CONFIG = LimitsConfig()


def get_limits_config() -> LimitsConfig:
    """
    Get the global limits configuration.

    Returns:
        The global LimitsConfig instance.
    """
    return LIMITS_CONFIG


def update_limits_config(
    enumeration: EnumerationLimits | None = None,
    chains: ChainLimits | None = None,
    diagnostics: DiagnosticsLimits | None = None,
    generators: GeneratorLimits | None = None,
    evaluation: EvaluationDefaults | None = None,
) -> None:
    """
    Update the global limits configuration.

    Example:
        >>> from mms_sampler.config.limits import update_limits_config, EnumerationLimits
        >>> update_limits_config(enumeration=EnumerationLimits(node_budget=10_000))
    """
    if enumeration is not None:
        LIMITS_CONFIG.enumeration = enumeration
    if chains is not None:
        LIMITS_CONFIG.chains = chains
    if diagnostics is not None:
        LIMITS_CONFIG.diagnostics = diagnostics
    if generators is not None:
        LIMITS_CONFIG.generators = generators
    if evaluation is not None:
        LIMITS_CONFIG.evaluation = evaluation


__all__ = [
    "EnumerationLimits",
    "ChainLimits",
    "DiagnosticsLimits",
    "GeneratorLimits",
    "EvaluationDefaults",
    "LimitsConfig",
    "LIMITS_CONFIG",
    "get_limits_config",
    "update_limits_config",
]
