"""Configuration module for mms-sampler."""

from mms_sampler.config.limits import (
    LIMITS_CONFIG,
    ChainLimits,
    DiagnosticsLimits,
    EnumerationLimits,
    EvaluationDefaults,
    GeneratorLimits,
    LimitsConfig,
    get_limits_config,
    update_limits_config,
)
from mms_sampler.config.presets import (
    PROJECTION_PRESETS,
    get_projection_preset,
    list_projection_presets,
)

__all__ = [
    "PROJECTION_PRESETS",
    "get_projection_preset",
    "list_projection_presets",
    "LIMITS_CONFIG",
    "LimitsConfig",
    "EnumerationLimits",
    "ChainLimits",
    "DiagnosticsLimits",
    "GeneratorLimits",
    "EvaluationDefaults",
    "get_limits_config",
    "update_limits_config",
]
