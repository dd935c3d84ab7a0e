"""Instance generators for tests, benchmarks and worked examples."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from mms_sampler.core.instance import Instance
from mms_sampler.generators.examples import (
    cycle_block_indices,
    gen_disconnected_example,
    gen_example1,
    gen_high_mixing_family,
    high_mixing_matrix,
    left_block_indices,
)
from mms_sampler.generators.random_instances import gen_hyperrectangle, gen_random
from mms_sampler.generators.threesat import (
    CnfFormula,
    brute_force_satisfiable,
    encode_3sat,
    parse_dimacs,
    random_3sat,
)


class GeneratorKind(Enum):
    RANDOM = "random"
    HYPERRECTANGLE = "hyperrectangle"
    DISCONNECTED_EXAMPLE = "disconnected_example"
    HIGH_MIXING_FAMILY = "high_mixing_family"
    THREESAT = "threesat"
    EXAMPLE1 = "example1"


@dataclass
class GeneratorSpec:
    """A generator kind plus its kind-specific parameters."""

    kind: GeneratorKind
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if isinstance(self.kind, str):
            self.kind = GeneratorKind(self.kind)
        if self.kind is GeneratorKind.RANDOM and self.params.get("seed") is None:
            raise ValueError("kind=random requires a seed")
        for key in ("n", "d", "ell", "num_vars"):
            if key in self.params and int(self.params[key]) < 1:
                raise ValueError(f"{key} must be positive")


def generate(spec: GeneratorSpec) -> list[Instance]:
    """
    Build the instance(s) described by a spec.

    Returns a list because the toy example is a family of blocks; every
    other kind yields one instance.
    """
    p = spec.params
    if spec.kind is GeneratorKind.RANDOM:
        return [
            gen_random(
                p["seed"], p["n"], p["d"], p["m"], p.get("density", 1.0), name=p.get("name", "")
            )
        ]
    if spec.kind is GeneratorKind.HYPERRECTANGLE:
        return [gen_hyperrectangle(p["ranges"], p["m"], seed=p.get("seed", 0))]
    if spec.kind is GeneratorKind.DISCONNECTED_EXAMPLE:
        return [gen_disconnected_example()]
    if spec.kind is GeneratorKind.HIGH_MIXING_FAMILY:
        return [gen_high_mixing_family(p["ell"])]
    if spec.kind is GeneratorKind.THREESAT:
        formula = p.get("formula")
        if formula is None:
            formula = random_3sat(p["seed"], p["num_vars"], p["num_clauses"])
        return [encode_3sat(formula)]
    return gen_example1(p.get("b_copies", 1))


__all__ = [
    "GeneratorKind",
    "GeneratorSpec",
    "generate",
    "gen_random",
    "gen_hyperrectangle",
    "gen_disconnected_example",
    "gen_high_mixing_family",
    "gen_example1",
    "high_mixing_matrix",
    "left_block_indices",
    "cycle_block_indices",
    "CnfFormula",
    "encode_3sat",
    "parse_dimacs",
    "random_3sat",
    "brute_force_satisfiable",
]
