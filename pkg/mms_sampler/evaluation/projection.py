"""Household type projections and distributions over type labels."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from mms_sampler.config import get_projection_preset, list_projection_presets
from mms_sampler.core.instance import Instance
from mms_sampler.errors import ConfigError

TypeLabel = tuple[int, ...]


@dataclass(frozen=True)
class TypeProjection:
    """
    Type label of every household column.

    Several columns may share a label when they agree on the projected
    attributes.
    """

    labels: tuple[TypeLabel, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("a projection needs at least one column")

    @classmethod
    def from_table(cls, labels: Iterable[Sequence[int] | int]) -> "TypeProjection":
        return cls(tuple(_as_label(label) for label in labels))

    @classmethod
    def identity(cls, n: int) -> "TypeProjection":
        return cls(tuple((i,) for i in range(n)))

    @classmethod
    def constant(cls, n: int) -> "TypeProjection":
        return cls(tuple((0,) for _ in range(n)))

    @classmethod
    def from_attributes(cls, inst: Instance, names: Sequence[str]) -> "TypeProjection":
        """Project each column onto the named attributes of the instance."""
        if inst.attribute_names is None:
            raise ConfigError(f"{inst.name or 'block'} carries no attribute names")
        missing = [name for name in names if name not in inst.attribute_names]
        if missing:
            raise ConfigError(f"unknown attributes: {', '.join(missing)}")
        coords = [inst.attribute_names.index(name) for name in names]
        return cls(tuple(tuple(int(v) for v in col[coords]) for col in inst.columns))

    @classmethod
    def from_preset(cls, inst: Instance, preset: str) -> "TypeProjection":
        names = get_projection_preset(preset)
        if names is None:
            raise ConfigError(
                f"unknown projection preset {preset!r}; choose from {', '.join(list_projection_presets())}"
            )
        return cls.from_attributes(inst, names)

    @property
    def num_columns(self) -> int:
        return len(self.labels)

    def distinct_labels(self) -> list[TypeLabel]:
        return sorted(set(self.labels))

    def check(self, inst: Instance) -> None:
        if self.num_columns != inst.num_types_n:
            raise ConfigError(
                f"projection covers {self.num_columns} columns, {inst.name or 'block'} has {inst.num_types_n}"
            )

    def aggregate(self, values: Sequence[float]) -> dict[TypeLabel, list[float]]:
        """Group per-column values by label."""
        groups: dict[TypeLabel, list[float]] = {}
        for label, value in zip(self.labels, values):
            groups.setdefault(label, []).append(float(value))
        return groups


def _as_label(label: Sequence[int] | int) -> TypeLabel:
    if isinstance(label, (int, np.integer)):
        return (int(label),)
    return tuple(int(v) for v in label)


@dataclass(frozen=True)
class TypeDistribution:
    """Probability weights over type labels."""

    weights: Mapping[TypeLabel, float]

    def __post_init__(self):
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("type weights must be nonnegative")
        total = math.fsum(self.weights.values())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"type weights sum to {total}, expected 1")

    @classmethod
    def from_groups(cls, groups: Mapping[TypeLabel, Iterable[float]], total: float | None = None):
        """Normalize grouped masses with compensated summation."""
        sums = {label: math.fsum(values) for label, values in groups.items()}
        total = math.fsum(sums.values()) if total is None else total
        return cls({label: s / total for label, s in sorted(sums.items())})

    def get(self, label: TypeLabel) -> float:
        return float(self.weights.get(label, 0.0))

    def labels(self) -> list[TypeLabel]:
        return sorted(self.weights)

    def class_masses(self, partition: Mapping[TypeLabel, object]) -> dict[object, float]:
        masses: dict[object, list[float]] = {}
        for label, w in self.weights.items():
            masses.setdefault(partition[label], []).append(w)
        return {cls_: math.fsum(ws) for cls_, ws in masses.items()}

    def to_rows(self) -> list[tuple[str, float]]:
        return [(format_label(label), self.weights[label]) for label in self.labels()]


def format_label(label: TypeLabel) -> str:
    return "-".join(str(v) for v in label)


def parse_label(text: str) -> TypeLabel:
    return tuple(int(v) for v in text.split("-"))
