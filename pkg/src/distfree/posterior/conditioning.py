"""Conditioning on data by the Schur complement of C22.

mean       = C12 (C22)^-1 z
covariance = C11 - C12 (C22)^-1 C21

The factorization of C22 and the data solve b~ = (C22)^-1 z are kept in the
result, so a new interrogation set only needs its own C12 (and C11).
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from distfree.config.settings import get_settings
from distfree.errors import DimensionMismatchError, IllConditionedCovarianceError
from distfree.posterior.joint import JointCovariance

logger = logging.getLogger(__name__)


class CholeskySolver:
    """Cholesky factorization of a symmetric matrix with escalating jitter.

    The first attempt uses no jitter. Each failure adds jitter to the
    diagonal, starting at jitter_policy * trace / size and growing tenfold.
    """

    def __init__(
        self,
        matrix: NDArray[np.float64],
        jitter_policy: float | None = None,
        max_escalations: int | None = None,
    ):
        settings = get_settings()
        policy = settings.jitter_policy if jitter_policy is None else jitter_policy
        escalations = settings.max_jitter_escalations if max_escalations is None else max_escalations

        matrix = np.asarray(matrix, dtype=np.float64)
        self.size = matrix.shape[0]
        self.data_solves = 0
        self.solves = 0

        trace = float(np.trace(matrix))
        step = policy * trace / self.size if trace > 0 and self.size else policy
        jitter = 0.0
        for attempt in range(escalations + 1):
            try:
                self._factor = cho_factor(
                    matrix + jitter * np.eye(self.size), lower=True, check_finite=True
                )
                break
            except LinAlgError:
                logger.debug(f"Cholesky attempt {attempt} failed with jitter {jitter:.3g}")
                jitter = step if jitter == 0.0 else 10.0 * jitter
        else:
            estimate = float(np.linalg.cond(matrix))
            raise IllConditionedCovarianceError(
                f"covariance of size {self.size} is not positive definite after "
                f"{escalations} jitter escalations (condition estimate {estimate:.3g})",
                condition_estimate=estimate,
                jitter=jitter,
            )
        self.jitter = jitter
        if jitter > 0.0:
            logger.warning(f"Applied jitter {jitter:.3g} to a {self.size}x{self.size} covariance")

    @property
    def lower_factor(self) -> NDArray[np.float64]:
        """L with L L^T = matrix + jitter * I."""
        return np.tril(self._factor[0])

    def solve(self, rhs: NDArray[np.float64]) -> NDArray[np.float64]:
        self.solves += 1
        return cho_solve(self._factor, rhs, check_finite=False)

    def data_solve(self, z: NDArray[np.float64]) -> NDArray[np.float64]:
        """Solve against a data vector (counted separately for reuse checks)."""
        self.data_solves += 1
        return self.solve(z)


@dataclass(frozen=True, eq=False)
class PosteriorResult:
    """Posterior moments on an interrogation set.

    ``covariance`` is None when the set exceeded the full-covariance cap;
    ``variance`` (its diagonal) is always present. ``jitter_used`` is the
    diagonal shift that made C22 factorizable (0 when none was needed).
    """

    mean: NDArray[np.float64]
    covariance: NDArray[np.float64] | None
    variance: NDArray[np.float64]
    data_solve: NDArray[np.float64]
    jitter_used: float
    solver: CholeskySolver = field(repr=False)
    mean_offset: NDArray[np.float64] | None = None

    @property
    def log_jitter_used(self) -> float:
        """log10 of the jitter, -inf when none was applied."""
        return float(np.log10(self.jitter_used)) if self.jitter_used > 0 else float("-inf")


def _posterior_covariance(
    c11: NDArray[np.float64] | None,
    c12: NDArray[np.float64],
    solver: CholeskySolver,
    full_cap: int | None,
) -> tuple[NDArray[np.float64] | None, NDArray[np.float64]]:
    n = c12.shape[0]
    if c11 is None:
        return None, np.full(n, np.nan)
    cap = get_settings().full_covariance_cap if full_cap is None else full_cap
    gain = solver.solve(c12.T)
    if n <= cap:
        covariance = c11 - c12 @ gain
        covariance = 0.5 * (covariance + covariance.T)
        return covariance, np.diag(covariance).copy()
    logger.info(f"Interrogation set of size {n} exceeds cap {cap}: keeping the variance only")
    return None, np.diag(c11) - np.einsum("ij,ji->i", c12, gain)


def condition(
    joint: JointCovariance,
    z: NDArray[np.float64],
    jitter_policy: float | None = None,
    data_offset: NDArray[np.float64] | None = None,
    mean_offset: NDArray[np.float64] | None = None,
    full_covariance_cap: int | None = None,
) -> PosteriorResult:
    """Condition the joint Gaussian on observed data.

    Args:
        joint: Joint covariance of (Phi(X), Psi(B))
        z: Observed data vector of length m
        jitter_policy: Relative jitter step (Settings.jitter_policy when None)
        data_offset: Prior mean of the data, subtracted from z
        mean_offset: Prior mean of Phi(X), added to the posterior mean
        full_covariance_cap: Largest n with a dense posterior covariance

    Returns:
        PosteriorResult holding the factorization of C22 for reuse

    Raises:
        DimensionMismatchError: If z or an offset has the wrong length
        IllConditionedCovarianceError: If C22 cannot be factorized
    """
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (joint.m,):
        raise DimensionMismatchError(f"data vector has shape {z.shape}, expected ({joint.m},)")
    if data_offset is not None:
        data_offset = np.asarray(data_offset, dtype=np.float64)
        if data_offset.shape != (joint.m,):
            raise DimensionMismatchError(f"data offset has shape {data_offset.shape}")
        z = z - data_offset

    solver = CholeskySolver(joint.c22, jitter_policy=jitter_policy)
    data_solve = solver.data_solve(z)
    mean = joint.c12 @ data_solve
    mean = _add_offset(mean, mean_offset)
    covariance, variance = _posterior_covariance(joint.c11, joint.c12, solver, full_covariance_cap)
    logger.info(f"Conditioned n={joint.n} on m={joint.m} data (jitter {solver.jitter:.3g})")
    return PosteriorResult(
        mean=mean,
        covariance=covariance,
        variance=variance,
        data_solve=data_solve,
        jitter_used=solver.jitter,
        solver=solver,
        mean_offset=None if mean_offset is None else np.asarray(mean_offset, dtype=np.float64),
    )


def reinterrogate(
    previous: PosteriorResult,
    c12_new: NDArray[np.float64],
    c11_new: NDArray[np.float64] | None = None,
    joint: JointCovariance | None = None,
    mean_offset: NDArray[np.float64] | None = None,
    full_covariance_cap: int | None = None,
) -> PosteriorResult:
    """Posterior on a new interrogation set, reusing the data solve.

    Neither C22 nor the data are touched: the mean is C12_new b~ and the
    covariance uses the cached factorization of C22.

    Args:
        previous: Result of condition() for the same C22 and data
        c12_new: Cross covariance of the new set with the data (n' x m)
        c11_new: Prior covariance of the new set; variance is NaN without it
        joint: Original joint covariance, only used to check dimensions
        mean_offset: Prior mean of the new set
        full_covariance_cap: Largest n' with a dense posterior covariance

    Raises:
        DimensionMismatchError: If the new blocks do not fit the data size
    """
    c12_new = np.atleast_2d(np.asarray(c12_new, dtype=np.float64))
    m = previous.data_solve.shape[0]
    if c12_new.shape[1] != m or (joint is not None and joint.m != m):
        raise DimensionMismatchError(f"new C12 has {c12_new.shape[1]} columns, data has {m}")
    if c11_new is not None:
        c11_new = np.atleast_2d(np.asarray(c11_new, dtype=np.float64))
        if c11_new.shape != (c12_new.shape[0], c12_new.shape[0]):
            raise DimensionMismatchError(f"new C11 has shape {c11_new.shape}")

    mean = c12_new @ previous.data_solve
    mean = _add_offset(mean, mean_offset)
    covariance, variance = _posterior_covariance(
        c11_new, c12_new, previous.solver, full_covariance_cap
    )
    logger.info(f"Reinterrogated {c12_new.shape[0]} test functions: reused data solve")
    return PosteriorResult(
        mean=mean,
        covariance=covariance,
        variance=variance,
        data_solve=previous.data_solve,
        jitter_used=previous.jitter_used,
        solver=previous.solver,
        mean_offset=None if mean_offset is None else np.asarray(mean_offset, dtype=np.float64),
    )


def _add_offset(mean: NDArray[np.float64], offset: NDArray[np.float64] | None) -> NDArray[np.float64]:
    if offset is None:
        return mean
    offset = np.asarray(offset, dtype=np.float64)
    if offset.shape != mean.shape:
        raise DimensionMismatchError(f"mean offset has shape {offset.shape}, expected {mean.shape}")
    return mean + offset
