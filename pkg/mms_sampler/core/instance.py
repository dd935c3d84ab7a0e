"""Instances, solutions and the weight functions every sampler consumes.

An instance is one census block: n household types (the columns v_i of V,
stored here as the rows of an (n, d) array), the block's attribute counts
c, and a base distribution over household types. A solution is a
multiplicity vector x over the types with V x = c.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln

from mms_sampler.errors import InfeasibleSolutionError, InstanceValidationError

PROB_TOLERANCE = 1e-12


@dataclass(frozen=True, order=True)
class Solution:
    """A multiset of households, as a tuple of per-type multiplicities."""

    multiplicities: tuple[int, ...]

    @classmethod
    def of(cls, values: Iterable[int]) -> "Solution":
        counts = tuple(int(v) for v in values)
        if any(v < 0 for v in counts):
            raise ValueError(f"Multiplicities must be nonnegative: {counts}")
        return cls(counts)

    @classmethod
    def zeros(cls, n: int) -> "Solution":
        return cls((0,) * n)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.multiplicities, dtype=np.int64)

    @property
    def size(self) -> int:
        """Number of households, the L1 norm of x."""
        return sum(self.multiplicities)

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.multiplicities) if v > 0]

    def to_record(self) -> dict[str, list[int]]:
        return {"x": list(self.multiplicities)}

    def __len__(self) -> int:
        return len(self.multiplicities)

    def __getitem__(self, i: int) -> int:
        return self.multiplicities[i]


SolutionLike = Solution | Sequence[int] | np.ndarray


def as_counts(x: SolutionLike) -> np.ndarray:
    """Return x as an int64 array regardless of its container."""
    if isinstance(x, Solution):
        return x.as_array()
    return np.asarray(x, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Instance:
    """
    One block of the multiset-sum problem.

    Args:
        columns: (n, d) integer array; row i is the household vector v_i.
        probs: Base probability of each household type.
        target: The block's count vector c.
        count_coord: Coordinate where every household vector is 1. Filled in
            by validate_instance() when left as None.
        uniform_target: Use pi(x) proportional to 1 instead of the
            multinomial posterior.
        name: Optional block identifier.
        attribute_names: Optional names of the d coordinates.
    """

    columns: np.ndarray
    probs: np.ndarray
    target: np.ndarray
    count_coord: int | None = None
    uniform_target: bool = False
    name: str = ""
    attribute_names: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        columns = np.array(self.columns, dtype=np.int64, ndmin=2)
        probs = np.array(self.probs, dtype=np.float64, ndmin=1)
        target = np.array(self.target, dtype=np.int64, ndmin=1)
        for arr in (columns, probs, target):
            arr.setflags(write=False)
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "target", target)
        if self.attribute_names is not None:
            object.__setattr__(self, "attribute_names", tuple(self.attribute_names))

    @property
    def dim_d(self) -> int:
        return int(self.columns.shape[1])

    @property
    def num_types_n(self) -> int:
        return int(self.columns.shape[0])

    @property
    def m(self) -> int:
        """Household count of the block."""
        if self.count_coord is None:
            raise InstanceValidationError("instance has not been validated")
        return int(self.target[self.count_coord])

    @cached_property
    def log_probs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.probs)

    @cached_property
    def column_norms(self) -> np.ndarray:
        return self.columns.sum(axis=1)

    @cached_property
    def eligible(self) -> np.ndarray:
        """Indices of household types with v_i <= c."""
        return np.flatnonzero(np.all(self.columns <= self.target, axis=1))

    def with_target(self, target: Sequence[int]) -> "Instance":
        return validate_instance(dataclasses.replace(self, target=np.asarray(target)))

    def with_probs(self, probs: Sequence[float]) -> "Instance":
        """The same block under another base distribution, e.g. a reweighted one."""
        return validate_instance(dataclasses.replace(self, probs=np.asarray(probs)))

    def describe(self) -> str:
        label = self.name or "instance"
        return f"{label}: n={self.num_types_n}, d={self.dim_d}, m={self.m}"


def validate_instance(raw: Instance) -> Instance:
    """
    Check every instance invariant and identify the household-count coordinate.

    Args:
        raw: A possibly unvalidated instance.

    Returns:
        The instance with count_coord filled in.

    Raises:
        InstanceValidationError: Naming the first violated invariant.
    """
    columns, probs, target = raw.columns, raw.probs, raw.target
    if columns.ndim != 2 or columns.shape[0] == 0 or columns.shape[1] == 0:
        raise InstanceValidationError("columns must be a non-empty n x d matrix")
    n, d = columns.shape
    if probs.shape != (n,):
        raise InstanceValidationError(f"expected {n} probabilities, got {probs.size}")
    if target.shape != (d,):
        raise InstanceValidationError(f"expected target of length {d}, got {target.size}")
    if (columns < 0).any():
        i, j = np.argwhere(columns < 0)[0]
        raise InstanceValidationError(f"negative entry in column {i} at coordinate {j}")
    if (target < 0).any():
        raise InstanceValidationError("negative entry in target counts")
    if not np.all(np.isfinite(probs)) or (probs <= 0).any():
        raise InstanceValidationError("probabilities must be strictly positive")
    total = float(np.sum(probs))
    if abs(total - 1.0) > PROB_TOLERANCE:
        raise InstanceValidationError(f"probabilities sum to {total:.12g}, expected 1")
    unique = np.unique(columns, axis=0)
    if unique.shape[0] != n:
        raise InstanceValidationError("duplicate columns: household types must be distinct")

    ones = np.flatnonzero(np.all(columns == 1, axis=0))
    if raw.count_coord is None:
        if ones.size == 0:
            raise InstanceValidationError("no count coordinate: no all-ones row in V")
        count_coord = int(ones[0])
    else:
        count_coord = int(raw.count_coord)
        if not 0 <= count_coord < d or count_coord not in ones:
            raise InstanceValidationError(
                f"no count coordinate: coordinate {raw.count_coord} is not all ones"
            )
    if raw.attribute_names is not None and len(raw.attribute_names) != d:
        raise InstanceValidationError(f"expected {d} attribute names")
    return dataclasses.replace(raw, count_coord=count_coord)


def make_instance(
    columns: Sequence[Sequence[int]] | np.ndarray,
    probs: Sequence[float] | np.ndarray,
    target: Sequence[int] | np.ndarray,
    count_coord: int | None = None,
    **meta,
) -> Instance:
    """Build and validate an instance in one call."""
    return validate_instance(
        Instance(
            columns=np.asarray(columns),
            probs=np.asarray(probs),
            target=np.asarray(target),
            count_coord=count_coord,
            **meta,
        )
    )


def attribute_sum(inst: Instance, x: SolutionLike) -> np.ndarray:
    """V x."""
    return as_counts(x) @ inst.columns


def residual(inst: Instance, x: SolutionLike) -> np.ndarray:
    """c - V x; all zero iff x is exact, nonnegative iff x is feasible."""
    return inst.target - attribute_sum(inst, x)


def residual_norm(inst: Instance, x: SolutionLike) -> int:
    return int(np.abs(residual(inst, x)).sum())


def is_feasible(inst: Instance, x: SolutionLike) -> bool:
    counts = as_counts(x)
    return bool((counts >= 0).all() and (residual(inst, counts) >= 0).all())


def is_exact(inst: Instance, x: SolutionLike) -> bool:
    counts = as_counts(x)
    return bool((counts >= 0).all() and not residual(inst, counts).any())


def log_multinomial(counts: np.ndarray) -> float:
    """log of (sum counts)! / prod(counts_i!)."""
    return float(gammaln(counts.sum() + 1) - gammaln(counts + 1).sum())


def linear_score_L(inst: Instance, x: SolutionLike) -> float:
    """Sum of x_i log p_i, the multinomial-free part of log f."""
    counts = as_counts(x)
    mask = counts > 0
    return float(np.dot(counts[mask], inst.log_probs[mask]))


def log_f(inst: Instance, x: SolutionLike) -> float:
    """
    Log of the unnormalized posterior weight of a feasible multiset.

    f(x) is the probability that ||x||_1 i.i.d. draws from the base
    distribution produce exactly the multiset x.

    Raises:
        InfeasibleSolutionError: If x is not feasible for inst.
    """
    counts = as_counts(x)
    if counts.shape != (inst.num_types_n,) or not is_feasible(inst, counts):
        raise InfeasibleSolutionError(f"solution {counts.tolist()} is not feasible")
    return log_multinomial(counts) + linear_score_L(inst, counts)


def log_target(inst: Instance, x: SolutionLike) -> float:
    """Log weight of x under the instance's target distribution."""
    if inst.uniform_target:
        if not is_feasible(inst, x):
            raise InfeasibleSolutionError(f"solution {as_counts(x).tolist()} is not feasible")
        return 0.0
    return log_f(inst, x)


def restrict_columns(
    inst: Instance,
    indices: Sequence[int],
    target: Sequence[int] | None = None,
) -> Instance:
    """
    Sub-instance on a subset of household types.

    Probabilities are renormalized over the kept types; the uniform-target
    flag and metadata carry over.
    """
    idx = np.asarray(indices, dtype=np.int64)
    probs = inst.probs[idx]
    return validate_instance(
        dataclasses.replace(
            inst,
            columns=inst.columns[idx],
            probs=probs / probs.sum(),
            target=inst.target if target is None else np.asarray(target),
            count_coord=inst.count_coord,
        )
    )
