"""3SAT formulas and their encoding as multiset-sum blocks.

A formula over n variables with m clauses becomes a block with one row per
variable (target 1), one row per clause (target 7) and a household-count
row (target n + m). Each literal contributes a column with a 1 in its
variable row and in every clause row it appears in; each clause has three
slack columns with 4, 5 and 6 in its row. A clause row reaches 7 exactly
when one to three of its literals are selected, so the block is solvable
iff the formula is satisfiable.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from mms_sampler.chains.rng import SeededRNG
from mms_sampler.core.instance import Instance, make_instance

logger = logging.getLogger(__name__)

CLAUSE_TARGET = 7
SLACK_VALUES = (4, 5, 6)
BRUTE_FORCE_MAX_VARS = 20


@dataclass(frozen=True)
class CnfFormula:
    """A 3-CNF formula; literals are signed 1-based variable indices."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("a formula needs at least one variable")
        clauses = tuple(tuple(int(lit) for lit in clause) for clause in self.clauses)
        for clause in clauses:
            if len(clause) != 3:
                raise ValueError(f"clause {clause} does not have exactly 3 literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")
        object.__setattr__(self, "clauses", clauses)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {self.num_clauses}"]
        lines += [" ".join(str(lit) for lit in clause) + " 0" for clause in self.clauses]
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    """
    Parse a DIMACS CNF document whose clauses all have three literals.

    Raises:
        ValueError: If the header is missing or a clause is malformed.
    """
    num_vars: int | None = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"Failed to parse DIMACS header: {line!r}")
            num_vars = int(parts[2])
            continue
        for token in line.split():
            lit = int(token)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if num_vars is None:
        raise ValueError("Failed to parse DIMACS: missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    return CnfFormula(num_vars, tuple(clauses))  # type: ignore[arg-type]


def random_3sat(seed: int, num_vars: int, num_clauses: int) -> CnfFormula:
    """Clauses over three distinct variables with independent random signs."""
    if num_vars < 3:
        raise ValueError("random 3SAT needs at least 3 variables")
    gen = SeededRNG(seed).generator
    clauses = []
    for _ in range(num_clauses):
        variables = gen.choice(num_vars, size=3, replace=False) + 1
        signs = np.where(gen.random(3) < 0.5, -1, 1)
        clauses.append(tuple(int(v) for v in variables * signs))
    return CnfFormula(num_vars, tuple(clauses))


def brute_force_satisfiable(formula: CnfFormula) -> bool:
    """Try every assignment; limited to small formulas."""
    n = formula.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_MAX_VARS} variables")
    if not formula.clauses:
        return True
    codes = np.arange(1 << n, dtype=np.int64)
    # assignment[a, v] is the truth value of variable v + 1 under assignment a
    assignment = ((codes[:, None] >> np.arange(n)) & 1).astype(bool)
    satisfied = np.ones(codes.size, dtype=bool)
    for clause in formula.clauses:
        clause_ok = np.zeros(codes.size, dtype=bool)
        for lit in clause:
            value = assignment[:, abs(lit) - 1]
            clause_ok |= value if lit > 0 else ~value
        satisfied &= clause_ok
        if not satisfied.any():
            return False
    return bool(satisfied.any())


def encode_3sat(formula: CnfFormula) -> Instance:
    """
    Encode a formula as a block whose exact solutions are satisfying assignments.

    A variable that appears in no clause (or only in clauses that contain
    both of its literals) yields identical literal columns; one copy is kept.
    """
    n, m = formula.num_vars, formula.num_clauses
    d = n + m + 1
    columns: list[np.ndarray] = []
    seen: set[tuple[int, ...]] = set()
    for var in range(1, n + 1):
        for lit in (var, -var):
            col = np.zeros(d, dtype=np.int64)
            col[var - 1] = 1
            for j, clause in enumerate(formula.clauses):
                if lit in clause:
                    col[n + j] = 1
            col[-1] = 1
            key = tuple(col.tolist())
            if key not in seen:
                seen.add(key)
                columns.append(col)
    for j in range(m):
        for value in SLACK_VALUES:
            col = np.zeros(d, dtype=np.int64)
            col[n + j] = value
            col[-1] = 1
            columns.append(col)

    target = np.concatenate(
        [np.ones(n, dtype=np.int64), np.full(m, CLAUSE_TARGET, dtype=np.int64), [n + m]]
    )
    k = len(columns)
    logger.debug("encoded 3SAT formula: %d vars, %d clauses, %d columns", n, m, k)
    return make_instance(np.vstack(columns), np.full(k, 1.0 / k), target, count_coord=d - 1)
