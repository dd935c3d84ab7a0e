"""Explicit transition matrices of the simple, truncated and k-swap chains.

Rows are accumulated off the diagonal from each chain's move rule and the
diagonal is set to complete the row.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from math import comb
from typing import Iterator

import numpy as np
from scipy import sparse
from scipy.special import logsumexp

from mms_sampler.chains.reduced import candidate_log_weights
from mms_sampler.chains.simple import resample_log_weights
from mms_sampler.config import get_limits_config
from mms_sampler.core.instance import Instance, Solution, is_exact, log_target, residual_norm
from mms_sampler.enumeration.search import enumerate_exact, enumerate_feasible
from mms_sampler.enumeration.swaps import SwapCache
from mms_sampler.errors import StateSpaceTooLarge

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KernelKind:
    """Which chain a kernel describes, with its parameters."""

    name: str
    gamma: float = 0.0
    k: int = 0
    omega: int | None = None

    @classmethod
    def simple(cls, gamma: float) -> "KernelKind":
        return cls("simple", gamma=gamma)

    @classmethod
    def reduced(cls, k: int) -> "KernelKind":
        if k < 2:
            raise ValueError("k must be at least 2")
        return cls("reduced", k=k)

    @classmethod
    def truncated(cls, gamma: float, omega: int) -> "KernelKind":
        return cls("truncated", gamma=gamma, omega=omega)

    @property
    def on_feasible_states(self) -> bool:
        return self.name in ("simple", "truncated")

    def label(self) -> str:
        if self.name == "reduced":
            return f"reduced(k={self.k})"
        if self.name == "truncated":
            return f"truncated(gamma={self.gamma:g}, omega={self.omega})"
        return f"simple(gamma={self.gamma:g})"


@dataclass
class KernelMatrix:
    """A row-stochastic matrix over an enumerated state space."""

    states: list[Solution]
    rows: sparse.csr_matrix
    kind: KernelKind
    exact: np.ndarray
    log_target: np.ndarray
    index: dict[Solution, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {x: a for a, x in enumerate(self.states)}

    @property
    def size(self) -> int:
        return len(self.states)

    def dense(self) -> np.ndarray:
        return self.rows.toarray()

    def indices_of(self, subset) -> np.ndarray:
        return np.asarray([self.index[x] for x in subset], dtype=np.int64)

    def check(self, tol: float = 1e-10) -> None:
        """Raise ValueError unless rows sum to 1 and the chain is lazy."""
        sums = np.asarray(self.rows.sum(axis=1)).ravel()
        if np.abs(sums - 1.0).max(initial=0.0) > tol:
            raise ValueError("kernel rows do not sum to 1")
        if (self.rows.diagonal() < 0.5 - tol).any():
            raise ValueError("kernel is not lazy")
        if (self.rows.data < -tol).any():
            raise ValueError("kernel has negative entries")


def state_log_target(inst: Instance, kind: KernelKind, x: Solution) -> float:
    """Log stationary weight of a state under the chain's target."""
    base = log_target(inst, x)
    if kind.on_feasible_states:
        return base - kind.gamma * residual_norm(inst, x)
    return base


def _softmax(log_w: np.ndarray) -> np.ndarray:
    return np.exp(log_w - logsumexp(log_w))


def sub_multisets(x: np.ndarray, k: int) -> Iterator[np.ndarray]:
    """Every z <= x (entrywise) with ||z||_1 = k."""
    support = np.flatnonzero(x)
    z = np.zeros_like(x)

    def descend(pos: int, remaining: int) -> Iterator[np.ndarray]:
        if remaining == 0:
            yield z.copy()
            return
        if pos == support.size:
            return
        i = support[pos]
        for g in range(min(int(x[i]), remaining), -1, -1):
            z[i] = g
            yield from descend(pos + 1, remaining - g)
        z[i] = 0

    yield from descend(0, k)


def _finish(states, entries, kind, exact, log_w) -> KernelMatrix:
    size = len(states)
    rows, cols, vals = entries
    off = sparse.coo_matrix((vals, (rows, cols)), shape=(size, size)).tocsr()
    diag = 1.0 - np.asarray(off.sum(axis=1)).ravel()
    matrix = (off + sparse.diags(diag)).tocsr()
    return KernelMatrix(states, matrix, kind, np.asarray(exact, dtype=bool), np.asarray(log_w))


def _build_simple(inst: Instance, kind: KernelKind, cap: int) -> KernelMatrix:
    states = enumerate_feasible(inst, cap, kind.omega)
    index = {x: a for a, x in enumerate(states)}
    eligible = inst.eligible
    rows, cols, vals = [], [], []
    for a, state in enumerate(states):
        x = state.as_array()
        for i in eligible:
            probs = _softmax(resample_log_weights(inst, kind.gamma, x, int(i), kind.omega))
            for g, p in enumerate(probs):
                if g == x[i] or p == 0.0:
                    continue
                moved = x.copy()
                moved[i] = g
                rows.append(a)
                cols.append(index[Solution.of(moved)])
                vals.append(p / (2 * eligible.size))
    exact = [is_exact(inst, x) for x in states]
    log_w = [state_log_target(inst, kind, x) for x in states]
    return _finish(states, (rows, cols, vals), kind, exact, log_w)


def _build_reduced(inst: Instance, kind: KernelKind, cap: int) -> KernelMatrix:
    found = enumerate_exact(inst, cap)
    if not found.complete:
        raise StateSpaceTooLarge("exact solution set", cap)
    states = found.solutions
    index = {x: a for a, x in enumerate(states)}
    k, m = kind.k, inst.m
    rows, cols, vals = [], [], []
    if m >= k:
        cache = SwapCache(inst)
        scale = 1.0 / (2 * comb(m, k))
        for a, state in enumerate(states):
            x = state.as_array()
            for z in sub_multisets(x, k):
                replacements = cache.replacements(z)
                if len(replacements) == 1:
                    continue
                candidates = (x - z) + np.vstack(replacements)
                probs = _softmax(candidate_log_weights(inst, candidates))
                for cand, p in zip(candidates, probs):
                    b = index[Solution.of(cand)]
                    if b != a:
                        rows.append(a)
                        cols.append(b)
                        vals.append(scale * p)
    else:
        logger.warning("block has %d households, fewer than k=%d: identity kernel", m, k)
    log_w = [state_log_target(inst, kind, x) for x in states]
    return _finish(states, (rows, cols, vals), kind, [True] * len(states), log_w)


def build_kernel(inst: Instance, kind: KernelKind, state_cap: int | None = None) -> KernelMatrix:
    """
    Materialize a chain's transition matrix.

    Raises:
        StateSpaceTooLarge: If the state space exceeds the configured cap.
    """
    limits = get_limits_config().diagnostics
    if kind.on_feasible_states:
        kernel = _build_simple(inst, kind, state_cap or limits.simple_state_cap)
    else:
        kernel = _build_reduced(inst, kind, state_cap or limits.reduced_state_cap)
    logger.info("built %s kernel over %d states (%d nonzeros)", kind.label(), kernel.size, kernel.rows.nnz)
    return kernel
