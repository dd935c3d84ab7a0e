"""Spectral and mixing analysis of explicit kernels.

All functions take an optional vector of unnormalized log weights; when it
is omitted the kernel's own stationary target is used.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy import linalg, sparse
from scipy.sparse import csgraph
from scipy.sparse.linalg import eigsh
from scipy.special import logsumexp

from mms_sampler.config import get_limits_config
from mms_sampler.core.instance import Solution
from mms_sampler.diagnostics.kernels import KernelMatrix
from mms_sampler.errors import DisconnectedChainError, NonReversibleKernelError

logger = logging.getLogger(__name__)

StateSubset = Union[Iterable[Solution], np.ndarray]


def stationary(kernel: KernelMatrix, log_weights: np.ndarray | None = None) -> np.ndarray:
    """Normalized target distribution over the kernel's states."""
    log_w = kernel.log_target if log_weights is None else np.asarray(log_weights, dtype=float)
    return np.exp(log_w - logsumexp(log_w))


def _subset_indices(kernel: KernelMatrix, subset: StateSubset) -> np.ndarray:
    if isinstance(subset, np.ndarray) and subset.dtype.kind in "iu":
        return subset
    return kernel.indices_of(list(subset))


def _epsilon(epsilon: float | None) -> float:
    return get_limits_config().diagnostics.epsilon if epsilon is None else epsilon


def verify_detailed_balance(kernel: KernelMatrix, log_weights: np.ndarray | None = None) -> float:
    """Max over state pairs of |s(x)P(x,y) - s(y)P(y,x)| with s normalized."""
    sigma = stationary(kernel, log_weights)
    flow = sparse.diags(sigma) @ kernel.rows
    gap = abs(flow - flow.T)
    return float(gap.max()) if gap.nnz else 0.0


def kernel_components(kernel: KernelMatrix) -> list[np.ndarray]:
    """State indices of each connected component of the transition graph."""
    off = kernel.rows.copy()
    off.setdiag(0)
    off.eliminate_zeros()
    count, labels = csgraph.connected_components(off, directed=True, connection="weak")
    return [np.flatnonzero(labels == c) for c in range(count)]


def second_eigenvalue(kernel: KernelMatrix, log_weights: np.ndarray | None = None) -> float:
    """
    Second-largest eigenvalue of a reversible kernel.

    Computed on D^{1/2} P D^{-1/2}, which is symmetric when P is reversible
    with respect to D.
    """
    if kernel.size < 2:
        return 0.0
    root = np.sqrt(stationary(kernel, log_weights))
    sym = sparse.diags(root) @ kernel.rows @ sparse.diags(1.0 / root)
    sym = (sym + sym.T) * 0.5
    if kernel.size <= get_limits_config().diagnostics.dense_eigen_limit:
        values = linalg.eigh(sym.toarray(), eigvals_only=True)
        lam = float(values[-2])
    else:
        values = eigsh(sym.tocsc(), k=2, which="LA", tol=1e-12, return_eigenvectors=False)
        lam = float(np.sort(values)[0])
    return min(max(lam, 0.0), 1.0)


@dataclass
class SpectralReport:
    """Relaxation data and iteration bounds for one kernel and start."""

    kind: str
    num_states: int
    components: int
    lambda2: float
    tau_rel: float
    start_mass: float
    p_star: float | None = None
    n_lower: float | None = None
    n_upper: float | None = None

    @property
    def connected(self) -> bool:
        return self.components == 1

    def to_record(self) -> dict:
        return asdict(self)


def simple_chain_bounds(
    tau_rel: float, p_star: float, start_mass: float, epsilon: float
) -> tuple[float, float]:
    """Lower and upper bounds on the conditioned iteration count of the simple chain."""
    lower = (tau_rel - 1) * math.log(3 / (4 * epsilon * p_star)) / ((1 + 2 * epsilon / 3) * p_star)
    upper = tau_rel * math.log(3 / (2 * epsilon * p_star * start_mass)) / ((1 - 2 * epsilon / 3) * p_star)
    return lower, upper


def reduced_chain_bounds(tau_rel: float, start_mass: float, epsilon: float) -> tuple[float, float]:
    """Lower and upper bounds on the iteration count of the swap chain."""
    lower = (tau_rel - 1) * math.log(1 / (2 * epsilon))
    upper = tau_rel * math.log(1 / (epsilon * start_mass))
    return lower, upper


def spectral_report(
    kernel: KernelMatrix,
    start: Solution | StateSubset,
    log_weights: np.ndarray | None = None,
    epsilon: float | None = None,
) -> SpectralReport:
    """
    Summarize a kernel's mixing behaviour from a start state or start set.

    For a start set the simple-chain bound uses the least likely member,
    and the swap-chain bound uses the set's mass as in mixing_bound_from_set.

    Raises:
        NonReversibleKernelError: If detailed balance fails against the target.
    """
    eps = _epsilon(epsilon)
    tolerance = get_limits_config().diagnostics.balance_tolerance
    violation = verify_detailed_balance(kernel, log_weights)
    if violation > tolerance:
        raise NonReversibleKernelError(
            f"{kernel.kind.label()} violates detailed balance by {violation:.3e}"
        )
    sigma = stationary(kernel, log_weights)
    single = isinstance(start, Solution)
    idx = kernel.indices_of([start]) if single else _subset_indices(kernel, start)
    start_mass = float(sigma[idx].sum())
    p_star = float(sigma[kernel.exact].sum()) if kernel.kind.on_feasible_states else None

    components = len(kernel_components(kernel))
    report = SpectralReport(
        kind=kernel.kind.label(),
        num_states=kernel.size,
        components=components,
        lambda2=1.0,
        tau_rel=math.inf,
        start_mass=start_mass,
        p_star=p_star,
    )
    if components > 1:
        logger.info("%s has %d components: bounds omitted", report.kind, components)
        return report

    report.lambda2 = second_eigenvalue(kernel, log_weights)
    report.tau_rel = 1.0 / (1.0 - report.lambda2) if report.lambda2 < 1.0 else math.inf
    if kernel.kind.on_feasible_states:
        if p_star:
            worst = float(sigma[idx].min())
            report.n_lower, report.n_upper = simple_chain_bounds(report.tau_rel, p_star, worst, eps)
    elif single:
        report.n_lower, report.n_upper = reduced_chain_bounds(report.tau_rel, start_mass, eps)
    else:
        report.n_lower = (report.tau_rel - 1) * math.log(1 / (2 * eps))
        report.n_upper = mixing_bound_from_set(kernel, idx, log_weights, eps, tau_rel=report.tau_rel)
    logger.debug("%s: lambda2=%.9f tau_rel=%.4f", report.kind, report.lambda2, report.tau_rel)
    return report


@dataclass
class CutReport:
    """Conductance of one cut and the spectral bound it implies."""

    phi: float
    cheeger_bound: float
    mass: float


def conductance_of_cut(
    kernel: KernelMatrix, subset: StateSubset, log_weights: np.ndarray | None = None
) -> CutReport:
    """
    Q(S, S^c) / s(S) for a set S of target mass at most one half.

    cheeger_bound is the implied lower bound 1 - 2*phi on lambda2.

    Raises:
        ValueError: If S has zero mass or mass above one half.
    """
    sigma = stationary(kernel, log_weights)
    idx = _subset_indices(kernel, subset)
    mass = float(sigma[idx].sum())
    if mass <= 0.0 or mass > 0.5 + 1e-12:
        raise ValueError(f"cut mass must lie in (0, 1/2], got {mass}")
    inside = np.zeros(kernel.size, dtype=bool)
    inside[idx] = True
    block = kernel.rows[inside][:, ~inside]
    flow = float(sigma[inside] @ np.asarray(block.sum(axis=1)).ravel())
    phi = flow / mass
    return CutReport(phi=phi, cheeger_bound=1.0 - 2.0 * phi, mass=mass)


def stationary_of_components(
    kernel: KernelMatrix, pi0: np.ndarray, log_weights: np.ndarray | None = None
) -> np.ndarray:
    """The limit of pi0 P^t: each component keeps its pi0 mass, spread by the target."""
    pi0 = np.asarray(pi0, dtype=float)
    sigma = stationary(kernel, log_weights)
    limit = np.zeros(kernel.size)
    for comp in kernel_components(kernel):
        weight = sigma[comp].sum()
        limit[comp] = pi0[comp].sum() * sigma[comp] / weight
    return limit


def mixing_bound_from_set(
    kernel: KernelMatrix,
    subset: StateSubset,
    log_weights: np.ndarray | None = None,
    epsilon: float | None = None,
    tau_rel: float | None = None,
) -> float:
    """
    Iterations after which a chain started from the target restricted to S
    is epsilon-close to the target: tau_rel * log(1 / (2 eps sqrt(s(S)))).

    Raises:
        DisconnectedChainError: If the kernel is not irreducible.
        ValueError: If S is empty.
    """
    eps = _epsilon(epsilon)
    idx = _subset_indices(kernel, subset)
    if idx.size == 0:
        raise ValueError("start set is empty")
    if len(kernel_components(kernel)) > 1:
        raise DisconnectedChainError(f"{kernel.kind.label()} is not irreducible")
    mass = float(stationary(kernel, log_weights)[idx].sum())
    if tau_rel is None:
        tau_rel = 1.0 / (1.0 - second_eigenvalue(kernel, log_weights))
    return tau_rel * math.log(1.0 / (2.0 * eps * math.sqrt(mass)))


def _tvd_rows(mu: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    return 0.5 * np.abs(mu - sigma).sum(axis=-1)


def mixing_times_by_powers(
    kernel: KernelMatrix,
    epsilon: float | None = None,
    log_weights: np.ndarray | None = None,
    max_steps: int = 100_000,
) -> np.ndarray:
    """
    For every start state, the first t with d_TV(e_x P^t, s) <= epsilon.

    Starts that have not mixed after max_steps report -1.
    """
    eps = _epsilon(epsilon)
    sigma = stationary(kernel, log_weights)
    dense = kernel.dense()
    mu = np.eye(kernel.size)
    times = np.full(kernel.size, -1, dtype=np.int64)
    for t in range(max_steps + 1):
        done = (times < 0) & (_tvd_rows(mu, sigma) <= eps)
        times[done] = t
        if (times >= 0).all():
            break
        mu = mu @ dense
    return times


def mixing_time_by_powers(
    kernel: KernelMatrix,
    start: Solution | np.ndarray,
    epsilon: float | None = None,
    log_weights: np.ndarray | None = None,
    max_steps: int = 100_000,
) -> int | None:
    """First t with d_TV(mu0 P^t, s) <= epsilon; start is a state or a distribution."""
    eps = _epsilon(epsilon)
    sigma = stationary(kernel, log_weights)
    mu = _start_distribution(kernel, start)
    for t in range(max_steps + 1):
        if _tvd_rows(mu, sigma) <= eps:
            return t
        mu = kernel.rows.T @ mu
    return None


def _start_distribution(kernel: KernelMatrix, start: Solution | np.ndarray) -> np.ndarray:
    if isinstance(start, Solution):
        mu = np.zeros(kernel.size)
        mu[kernel.index[start]] = 1.0
        return mu
    return np.asarray(start, dtype=float)


@dataclass
class ConditionedMixing:
    """Mixing of the simple chain when its output is conditioned on exactness."""

    tau_star: int
    exact_mass: float
    iterations: float


def conditioned_mixing_time(
    kernel: KernelMatrix,
    start: Solution | np.ndarray,
    epsilon: float | None = None,
    max_steps: int = 100_000,
) -> ConditionedMixing | None:
    """
    Expected iterations for the restarting simple chain to return an
    epsilon-close exact sample.

    The unconditioned chain is run to accuracy 2 p* eps / 3, after which a
    run lands on an exact state with probability p; the restart wrapper then
    needs tau*/p iterations on average.
    """
    if not kernel.kind.on_feasible_states:
        raise ValueError("conditioned mixing applies to the simple chains only")
    eps = _epsilon(epsilon)
    sigma = stationary(kernel)
    p_star = float(sigma[kernel.exact].sum())
    if p_star == 0.0:
        return None
    tau_star = mixing_time_by_powers(kernel, start, 2 * p_star * eps / 3, max_steps=max_steps)
    if tau_star is None:
        return None
    mu = _start_distribution(kernel, start)
    for _ in range(tau_star):
        mu = kernel.rows.T @ mu
    exact_mass = float(mu[kernel.exact].sum())
    return ConditionedMixing(tau_star=tau_star, exact_mass=exact_mass, iterations=tau_star / exact_mass)


@dataclass
class ConditioningCheck:
    """TVD before and after conditioning on X, with the guaranteed ceiling."""

    tvd_joint: float
    tvd_conditioned: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.tvd_conditioned <= self.bound + 1e-12


def conditioning_tvd_bound(
    sigma: Sequence[float], sigma_prime: Sequence[float], exact: Sequence[bool]
) -> ConditioningCheck:
    """
    Compare d_TV(s, s') with d_TV of both laws conditioned on the exact states.

    If d_TV(s, s') <= eps then the conditioned distance is at most
    3 eps / (2 s(X)).
    """
    a = np.asarray(sigma, dtype=float)
    b = np.asarray(sigma_prime, dtype=float)
    mask = np.asarray(exact, dtype=bool)
    joint = float(0.5 * np.abs(a - b).sum())
    mass_a = a[mask].sum()
    mass_b = b[mask].sum()
    if mass_a <= 0.0 or mass_b <= 0.0:
        raise ValueError("both distributions need positive mass on exact states")
    conditioned = float(0.5 * np.abs(a[mask] / mass_a - b[mask] / mass_b).sum())
    return ConditioningCheck(joint, conditioned, 3.0 * joint / (2.0 * mass_a))
