"""File formats: instance JSON documents and line-delimited solution streams."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Iterator

import numpy as np
from pydantic import BaseModel, ValidationError, model_validator

from mms_sampler.core.instance import Instance, Solution, validate_instance
from mms_sampler.errors import InstanceValidationError


class InstanceFile(BaseModel):
    """On-disk instance document."""

    d: int
    n: int
    columns: list[list[int]]
    probs: list[float]
    c: list[int]
    count_coord: int
    name: str = ""
    uniform_target: bool = False
    attribute_names: list[str] | None = None

    @model_validator(mode="after")
    def _check_shapes(self) -> "InstanceFile":
        if len(self.columns) != self.n or len(self.probs) != self.n:
            raise ValueError(f"expected {self.n} columns and probabilities")
        if any(len(col) != self.d for col in self.columns) or len(self.c) != self.d:
            raise ValueError(f"every column and c must have length {self.d}")
        return self

    def to_instance(self) -> Instance:
        return validate_instance(
            Instance(
                columns=np.asarray(self.columns),
                probs=np.asarray(self.probs),
                target=np.asarray(self.c),
                count_coord=self.count_coord,
                uniform_target=self.uniform_target,
                name=self.name,
                attribute_names=tuple(self.attribute_names) if self.attribute_names else None,
            )
        )

    @classmethod
    def from_instance(cls, inst: Instance) -> "InstanceFile":
        return cls(
            d=inst.dim_d,
            n=inst.num_types_n,
            columns=inst.columns.tolist(),
            probs=[float(p) for p in inst.probs],
            c=inst.target.tolist(),
            count_coord=int(inst.count_coord),
            name=inst.name,
            uniform_target=inst.uniform_target,
            attribute_names=list(inst.attribute_names) if inst.attribute_names else None,
        )


class SolutionRecord(BaseModel):
    x: list[int]


class SampleRecord(BaseModel):
    """One sampled solution of one block, as written by batch runs."""

    block: str
    x: list[int]
    iterations_used: int
    restarts: int
    accepted: bool
    rng_seed: int
    algorithm: str
    start_state: list[int] | None = None
    exact_mode: bool = False


class CompletenessFooter(BaseModel):
    complete: bool
    count: int
    bound_gap: float | None = None


def dumps_instance(inst: Instance) -> str:
    return json.dumps(InstanceFile.from_instance(inst).model_dump(), sort_keys=True, indent=2)


def loads_instance(text: str, name: str = "") -> Instance:
    """
    Parse and validate an instance document.

    Raises:
        InstanceValidationError: If the document is malformed or invalid.
    """
    try:
        doc = InstanceFile.model_validate_json(text)
    except ValidationError as e:
        raise InstanceValidationError(f"Failed to parse instance: {e}") from e
    if name and not doc.name:
        doc.name = name
    return doc.to_instance()


def save_instance(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps_instance(inst) + "\n", encoding="utf-8")


def load_instance(path: str | Path) -> Instance:
    path = Path(path)
    return loads_instance(path.read_text(encoding="utf-8"), name=path.stem)


def write_jsonl(path: str | Path, records: Iterable[dict[str, Any]]) -> int:
    """Write one JSON object per line with sorted keys; returns the record count."""
    count = 0
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, sort_keys=True) + "\n")
            count += 1
    return count


def read_jsonl(path: str | Path) -> Iterator[dict[str, Any]]:
    with open(path, "r", encoding="utf-8") as f:
        for line in f:
            if line.strip():
                yield json.loads(line)


def read_solutions(path: str | Path) -> list[Solution]:
    """Read every record carrying an `x` field, skipping footers."""
    return [
        Solution.of(SolutionRecord.model_validate(rec).x)
        for rec in read_jsonl(path)
        if "x" in rec
    ]


def read_samples(path: str | Path) -> list[SampleRecord]:
    """Read a batch output stream."""
    return [SampleRecord.model_validate(rec) for rec in read_jsonl(path) if "x" in rec]
