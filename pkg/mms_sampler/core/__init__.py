"""Instances, solutions, weights and file formats."""

from mms_sampler.core.instance import (
    Instance,
    Solution,
    as_counts,
    attribute_sum,
    is_exact,
    is_feasible,
    linear_score_L,
    log_f,
    log_multinomial,
    log_target,
    make_instance,
    residual,
    residual_norm,
    restrict_columns,
    validate_instance,
)
from mms_sampler.core.io import (
    CompletenessFooter,
    InstanceFile,
    SampleRecord,
    SolutionRecord,
    dumps_instance,
    load_instance,
    loads_instance,
    read_jsonl,
    read_samples,
    read_solutions,
    save_instance,
    write_jsonl,
)

__all__ = [
    "Instance",
    "Solution",
    "as_counts",
    "attribute_sum",
    "is_exact",
    "is_feasible",
    "linear_score_L",
    "log_f",
    "log_multinomial",
    "log_target",
    "make_instance",
    "residual",
    "residual_norm",
    "restrict_columns",
    "validate_instance",
    "CompletenessFooter",
    "InstanceFile",
    "SampleRecord",
    "SolutionRecord",
    "dumps_instance",
    "load_instance",
    "loads_instance",
    "read_jsonl",
    "read_samples",
    "read_solutions",
    "save_instance",
    "write_jsonl",
]
