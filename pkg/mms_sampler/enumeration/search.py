"""Branch-and-bound over household multiplicities.

Columns are assigned one at a time in a fixed order. A partial assignment
is pruned when its residual c - V x has a negative entry, or when the
remaining household budget h = residual[count_coord] cannot cover the
residual: every later household adds between suffix_min and suffix_max to
each coordinate, so h * suffix_min <= residual <= h * suffix_max must hold.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy.special import gammaln

from mms_sampler.config import get_limits_config
from mms_sampler.core.instance import Instance, Solution, log_f
from mms_sampler.errors import NodeBudgetExceeded, StateSpaceTooLarge

logger = logging.getLogger(__name__)

# Scores are compared after rounding so equal sums computed in different
# orders tie exactly; partial nodes sit just ahead of equal-scored leaves.
SCORE_DECIMALS = 9
PARTIAL_OFFSET = 1e-7


@dataclass
class SolutionSet:
    """
    Exact solutions returned by an enumeration call.

    Args:
        solutions: Distinct exact solutions, in enumeration order.
        complete: True iff the call exhausted X.
        bound_gap: For an incomplete top-N call, the largest linear score of
            any unreturned solution minus the smallest returned score.
        frontier_bound: The largest linear score of any unreturned solution.
        nodes: Branch-and-bound nodes expanded.
    """

    solutions: list[Solution]
    complete: bool
    bound_gap: float | None = None
    frontier_bound: float | None = None
    nodes: int = 0

    def __post_init__(self):
        if self.complete and self.bound_gap is not None:
            raise ValueError("a complete solution set carries no bound gap")

    def __len__(self) -> int:
        return len(self.solutions)

    def __iter__(self) -> Iterator[Solution]:
        return iter(self.solutions)

    def footer(self) -> dict:
        return {"complete": self.complete, "count": len(self.solutions), "bound_gap": self.bound_gap}


class MultisetSearch:
    """
    Search tree over multiplicity vectors with V x = target.

    Args:
        inst: The block.
        order: Column exploration order (defaults to index order, which makes
            depth-first enumeration lexicographic).
        target: Override of the block target (used for swap classes).
        node_budget: Maximum node expansions before NodeBudgetExceeded.
    """

    def __init__(
        self,
        inst: Instance,
        order: Sequence[int] | None = None,
        target: np.ndarray | None = None,
        node_budget: int | None = None,
    ):
        self.inst = inst
        self.n = inst.num_types_n
        self.cc = int(inst.count_coord)
        self.target = np.asarray(inst.target if target is None else target, dtype=np.int64)
        self.order = np.arange(self.n) if order is None else np.asarray(order, dtype=np.int64)
        self.cols = inst.columns[self.order]
        self.node_budget = (
            get_limits_config().enumeration.node_budget if node_budget is None else node_budget
        )
        self.nodes = 0
        self.found = 0

        d = inst.dim_d
        big = np.iinfo(np.int64).max // 4
        self.suffix_max = np.zeros((self.n + 1, d), dtype=np.int64)
        self.suffix_min = np.full((self.n + 1, d), big, dtype=np.int64)
        self.suffix_max_norm = np.zeros(self.n + 1, dtype=np.int64)
        norms = self.cols.sum(axis=1)
        for p in range(self.n - 1, -1, -1):
            self.suffix_max[p] = np.maximum(self.cols[p], self.suffix_max[p + 1])
            self.suffix_min[p] = np.minimum(self.cols[p], self.suffix_min[p + 1])
            self.suffix_max_norm[p] = max(norms[p], self.suffix_max_norm[p + 1])

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise NodeBudgetExceeded(self.node_budget, self.found)

    def prunable(self, pos: int, residual: np.ndarray) -> bool:
        """True if no completion of this partial assignment is exact."""
        if (residual < 0).any():
            return True
        h = residual[self.cc]
        if h == 0:
            return bool(residual.any())
        if pos >= self.n:
            return True
        return bool(
            (residual > h * self.suffix_max[pos]).any()
            or (residual < h * self.suffix_min[pos]).any()
        )

    def g_max(self, pos: int, residual: np.ndarray) -> int:
        col = self.cols[pos]
        mask = col > 0
        return int(np.min(residual[mask] // col[mask]))

    def _emit(self, counts: np.ndarray) -> Solution:
        x = np.zeros(self.n, dtype=np.int64)
        x[self.order] = counts
        self.found += 1
        return Solution.of(x)

    # -- exact solutions, depth first -------------------------------------

    def iter_exact(self) -> Iterator[Solution]:
        counts = np.zeros(self.n, dtype=np.int64)
        yield from self._descend(0, self.target.copy(), counts)

    def _descend(self, pos: int, residual: np.ndarray, counts: np.ndarray) -> Iterator[Solution]:
        self._tick()
        if self.prunable(pos, residual):
            return
        if residual[self.cc] == 0:
            yield self._emit(counts)
            return
        col = self.cols[pos]
        if pos == self.n - 1:
            g = int(residual[self.cc])
            if np.array_equal(residual, g * col):
                counts[pos] = g
                yield self._emit(counts)
                counts[pos] = 0
            return
        for g in range(self.g_max(pos, residual) + 1):
            counts[pos] = g
            yield from self._descend(pos + 1, residual - g * col, counts)
        counts[pos] = 0

    # -- feasible multisets (V x <= target) --------------------------------

    def count_feasible(self, cap: int) -> int:
        return min(self._count(0, self.target.copy(), cap), cap)

    def _count(self, pos: int, residual: np.ndarray, cap: int) -> int:
        if pos == self.n or residual[self.cc] == 0:
            return 1
        g_max = self.g_max(pos, residual)
        if pos == self.n - 1:
            return g_max + 1
        total = 0
        for g in range(g_max + 1):
            total += self._count(pos + 1, residual - g * self.cols[pos], cap - total)
            if total >= cap:
                break
        return total

    def iter_feasible(self, omega: int | None = None) -> Iterator[Solution]:
        """Every x with V x <= target, optionally only those with ||c - Vx||_1 <= omega."""
        counts = np.zeros(self.n, dtype=np.int64)
        yield from self._feasible(0, self.target.copy(), counts, omega)

    def _feasible(
        self, pos: int, residual: np.ndarray, counts: np.ndarray, omega: int | None
    ) -> Iterator[Solution]:
        norm = int(residual.sum())
        if omega is not None:
            reachable = norm - int(residual[self.cc]) * int(self.suffix_max_norm[pos])
            if reachable > omega:
                return
        if pos == self.n or residual[self.cc] == 0:
            if omega is None or norm <= omega:
                yield self._emit(counts)
            return
        col = self.cols[pos]
        for g in range(self.g_max(pos, residual) + 1):
            counts[pos] = g
            yield from self._feasible(pos + 1, residual - g * col, counts, omega)
        counts[pos] = 0


def best_first_order(inst: Instance) -> np.ndarray:
    """Columns by descending log probability, ties by column vector."""
    keys = sorted(
        range(inst.num_types_n),
        key=lambda i: (-inst.log_probs[i], tuple(inst.columns[i].tolist())),
    )
    return np.asarray(keys, dtype=np.int64)


def _score_key(score: float) -> float:
    return round(-score, SCORE_DECIMALS)


@dataclass(order=True)
class _Entry:
    key: float
    leaf: int
    tiebreak: tuple | int
    pos: int = field(compare=False)
    residual: np.ndarray = field(compare=False)
    counts: tuple[int, ...] = field(compare=False)
    score: float = field(compare=False)


class TopNSearch(MultisetSearch):
    """
    Best-first search for the exact solutions with the largest linear score.

    A partial node's priority is the admissible bound
    U = L(partial) + h * max{log p_i : i unassigned, v_i <= residual};
    leaves pop in descending L, ties in lexicographic multiplicity order.
    """

    def __init__(self, inst: Instance, node_budget: int | None = None):
        super().__init__(inst, order=best_first_order(inst), node_budget=node_budget)
        self.lp = inst.log_probs[self.order]
        self._counter = itertools.count()

    def _upper_bound(self, pos: int, residual: np.ndarray, score: float) -> float | None:
        h = int(residual[self.cc])
        for p in range(pos, self.n):
            # cols are sorted by descending log p, so the first fit is the max
            if (self.cols[p] <= residual).all():
                return score + h * float(self.lp[p])
        return None

    def _leaf(self, counts: tuple[int, ...], residual: np.ndarray, score: float) -> _Entry:
        x = np.zeros(self.n, dtype=np.int64)
        x[self.order] = counts
        return _Entry(_score_key(score), 1, tuple(x.tolist()), self.n, residual, counts, score)

    def _partial(self, pos, residual, counts, score) -> _Entry | None:
        if self.prunable(pos, residual):
            return None
        bound = self._upper_bound(pos, residual, score)
        if bound is None:
            return None
        key = _score_key(bound) - PARTIAL_OFFSET
        return _Entry(key, 0, next(self._counter), pos, residual, counts, score)

    def run(self, limit: int) -> SolutionSet:
        heap: list[_Entry] = []
        root = self.target.copy()
        if not root.any():
            heap.append(self._leaf((0,) * self.n, root, 0.0))
        else:
            entry = self._partial(0, root, (0,) * self.n, 0.0)
            if entry is not None:
                heap.append(entry)

        solutions: list[Solution] = []
        scores: list[float] = []
        frontier: float | None = None
        while heap:
            entry = heapq.heappop(heap)
            self._tick()
            if entry.leaf:
                if len(solutions) == limit:
                    frontier = entry.score
                    break
                solutions.append(Solution(entry.tiebreak))
                scores.append(entry.score)
                self.found += 1
                continue
            col = self.cols[entry.pos]
            for g in range(self.g_max(entry.pos, entry.residual) + 1):
                residual = entry.residual - g * col
                counts = entry.counts[: entry.pos] + (g,) + entry.counts[entry.pos + 1 :]
                score = entry.score + g * float(self.lp[entry.pos]) if g else entry.score
                if residual[self.cc] == 0 and not residual.any():
                    heapq.heappush(heap, self._leaf(counts, residual, score))
                else:
                    child = self._partial(entry.pos + 1, residual, counts, score)
                    if child is not None:
                        heapq.heappush(heap, child)

        if frontier is None:
            return SolutionSet(solutions, complete=True, nodes=self.nodes)
        return SolutionSet(
            solutions,
            complete=False,
            bound_gap=frontier - min(scores),
            frontier_bound=frontier,
            nodes=self.nodes,
        )


def decide_mms(inst: Instance, node_budget: int | None = None) -> bool:
    """
    True iff the block has an exact solution.

    Raises:
        NodeBudgetExceeded: The undecided outcome; never read as False.
    """
    search = MultisetSearch(inst, node_budget=node_budget)
    found = next(search.iter_exact(), None) is not None
    logger.debug("decide_mms: %s after %d nodes", found, search.nodes)
    return found


def enumerate_exact(inst: Instance, limit: int, node_budget: int | None = None) -> SolutionSet:
    """Up to `limit` exact solutions in lexicographic order."""
    if limit < 1:
        raise ValueError("limit must be positive")
    search = MultisetSearch(inst, node_budget=node_budget)
    solutions = list(itertools.islice(search.iter_exact(), limit + 1))
    complete = len(solutions) <= limit
    logger.debug("enumerate_exact: %d solutions, complete=%s, %d nodes", len(solutions[:limit]), complete, search.nodes)
    return SolutionSet(solutions[:limit], complete=complete, nodes=search.nodes)


def enumerate_top_n(inst: Instance, n_best: int, node_budget: int | None = None) -> SolutionSet:
    """The `n_best` exact solutions with the largest linear score L."""
    if n_best < 1:
        raise ValueError("N must be positive")
    result = TopNSearch(inst, node_budget=node_budget).run(n_best)
    logger.debug(
        "enumerate_top_n: %d solutions, complete=%s, gap=%s, %d nodes",
        len(result), result.complete, result.bound_gap, result.nodes,
    )
    return result


def count_feasible(inst: Instance, cap: int) -> int:
    """|Y| for Y = {x : V x <= c}, or `cap` if Y has at least cap elements."""
    return MultisetSearch(inst).count_feasible(cap)


def enumerate_feasible(inst: Instance, cap: int, omega: int | None = None) -> list[Solution]:
    """
    Y (or Y_omega) as a list.

    Raises:
        StateSpaceTooLarge: If more than `cap` states exist.
    """
    states = list(itertools.islice(MultisetSearch(inst).iter_feasible(omega), cap + 1))
    if len(states) > cap:
        raise StateSpaceTooLarge("feasible set", cap)
    return states


def best_start_state(inst: Instance, solution_set: SolutionSet) -> tuple[Solution, bool]:
    """
    The f-maximizer of a solution set and whether it is certified as the mode.

    Unreturned solutions have f(x) <= m! * exp(frontier_bound), so the
    returned state is the global mode of pi (and pi(x0) >= 1/|X|) when its
    log f clears that bound.
    """
    if not solution_set.solutions:
        raise ValueError("empty solution set")
    weights = [log_f(inst, x) for x in solution_set.solutions]
    best = int(np.argmax(weights))
    if solution_set.complete:
        return solution_set.solutions[best], True
    ceiling = float(gammaln(inst.m + 1)) + float(solution_set.frontier_bound)
    return solution_set.solutions[best], weights[best] >= ceiling
