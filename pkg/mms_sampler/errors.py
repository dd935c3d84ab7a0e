"""Exception hierarchy for mms-sampler.

Value problems (bad instances, bad configs, bad solutions) subclass
ValueError; resource and convergence problems subclass RuntimeError.
"""


class MMSError(Exception):
    """Base class for every error raised by mms-sampler."""


class InstanceValidationError(MMSError, ValueError):
    """An instance violates one of its invariants."""


class InfeasibleSolutionError(MMSError, ValueError):
    """A multiplicity vector is not feasible (or not exact) for its instance."""


class ConfigError(MMSError, ValueError):
    """A sampler or CLI configuration is inconsistent."""


class NodeBudgetExceeded(MMSError, RuntimeError):
    """Branch-and-bound ran out of node expansions before finishing.

    For a decision query this is the "undecided" outcome and must not be
    read as infeasibility.
    """

    def __init__(self, budget: int, found: int = 0):
        self.budget = budget
        self.found = found
        super().__init__(
            f"node budget of {budget} expansions exceeded "
            f"({found} solution(s) found so far)"
        )


class RestartCapExceeded(MMSError, RuntimeError):
    """A rejection-style sampler hit its restart cap without accepting."""

    def __init__(self, algorithm: str, max_restarts: int):
        self.algorithm = algorithm
        self.max_restarts = max_restarts
        super().__init__(
            f"{algorithm}: no exact sample after {max_restarts} rounds; "
            "posterior mass on exact solutions is too thin"
        )


class StateSpaceTooLarge(MMSError, RuntimeError):
    """An enumerated state space exceeds the configured cap."""

    def __init__(self, what: str, cap: int):
        self.cap = cap
        super().__init__(f"{what} has more than {cap} states")


class IncompleteEnumerationError(MMSError, RuntimeError):
    """An exact computation needs all of X but enumeration stopped early."""


class NonReversibleKernelError(MMSError, RuntimeError):
    """A kernel fails detailed balance against the supplied target."""


class DisconnectedChainError(MMSError, RuntimeError):
    """An operation that requires an irreducible kernel got a disconnected one."""
