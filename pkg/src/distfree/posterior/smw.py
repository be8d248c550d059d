"""Finite-dimensional check that the two posterior formulas agree.

For x ~ N(x0, Gamma) and b = A^T x + e, e ~ N(0, Sigma):

information form: D = (Gamma^-1 + A Sigma^-1 A^T)^-1,
                  mean = D (Gamma^-1 x0 + A Sigma^-1 b)
covariance form:  K = Gamma A (A^T Gamma A + Sigma)^-1,
                  mean = x0 + K (b - A^T x0), D = Gamma - K A^T Gamma
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from distfree.errors import DimensionMismatchError, InvalidArgumentError
from distfree.posterior.joint import JointCovariance


@dataclass(frozen=True, eq=False)
class SMWReport:
    """Posterior moments from both forms and their largest relative gap."""

    information_mean: NDArray[np.float64]
    information_covariance: NDArray[np.float64]
    covariance_mean: NDArray[np.float64]
    covariance_covariance: NDArray[np.float64]
    mean_discrepancy: float
    covariance_discrepancy: float

    @property
    def discrepancy(self) -> float:
        return max(self.mean_discrepancy, self.covariance_discrepancy)


def _spd_factor(matrix: NDArray[np.float64], name: str) -> tuple[NDArray[np.float64], bool]:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidArgumentError(f"{name} must be square, got shape {matrix.shape}")
    scale = max(np.abs(matrix).max(initial=0.0), np.finfo(float).tiny)
    if np.abs(matrix - matrix.T).max(initial=0.0) > 1e-12 * scale:
        raise InvalidArgumentError(f"{name} is not symmetric")
    try:
        return cho_factor(matrix, lower=True)
    except LinAlgError as e:
        raise InvalidArgumentError(f"{name} is not positive definite") from e


def _relative_gap(a: NDArray[np.float64], b: NDArray[np.float64]) -> float:
    scale = max(float(np.linalg.norm(b)), float(np.linalg.norm(a)))
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(a - b)) / scale


def smw_equivalence_check(
    a: NDArray[np.float64],
    gamma: NDArray[np.float64],
    sigma: NDArray[np.float64],
    x0: NDArray[np.float64],
    b: NDArray[np.float64],
) -> SMWReport:
    """Compute the posterior by the information and covariance forms.

    Args:
        a: Observation matrix of shape (n, m), data are A^T x
        gamma: Prior covariance (n x n, SPD)
        sigma: Noise covariance (m x m, SPD)
        x0: Prior mean (n)
        b: Data (m)

    Raises:
        InvalidArgumentError: If gamma or sigma is not SPD
        DimensionMismatchError: If shapes disagree
    """
    a, gamma, sigma = (np.asarray(v, dtype=np.float64) for v in (a, gamma, sigma))
    x0, b = np.asarray(x0, dtype=np.float64), np.asarray(b, dtype=np.float64)
    n, m = a.shape
    if gamma.shape != (n, n) or sigma.shape != (m, m) or x0.shape != (n,) or b.shape != (m,):
        raise DimensionMismatchError(
            f"inconsistent shapes: A {a.shape}, Gamma {gamma.shape}, Sigma {sigma.shape}, "
            f"x0 {x0.shape}, b {b.shape}"
        )
    gamma_factor = _spd_factor(gamma, "Gamma")
    sigma_factor = _spd_factor(sigma, "Sigma")

    # Information form
    gamma_inv = cho_solve(gamma_factor, np.eye(n))
    precision = gamma_inv + a @ cho_solve(sigma_factor, a.T)
    precision = 0.5 * (precision + precision.T)
    precision_factor = cho_factor(precision, lower=True)
    info_cov = cho_solve(precision_factor, np.eye(n))
    info_mean = cho_solve(
        precision_factor, cho_solve(gamma_factor, x0) + a @ cho_solve(sigma_factor, b)
    )

    # Covariance form
    gamma_a = gamma @ a
    data_cov = a.T @ gamma_a + sigma
    data_factor = cho_factor(0.5 * (data_cov + data_cov.T), lower=True)
    cov_mean = x0 + gamma_a @ cho_solve(data_factor, b - a.T @ x0)
    cov_cov = gamma - gamma_a @ cho_solve(data_factor, gamma_a.T)

    return SMWReport(
        information_mean=info_mean,
        information_covariance=0.5 * (info_cov + info_cov.T),
        covariance_mean=cov_mean,
        covariance_covariance=0.5 * (cov_cov + cov_cov.T),
        mean_discrepancy=_relative_gap(info_mean, cov_mean),
        covariance_discrepancy=_relative_gap(info_cov, cov_cov),
    )


def linear_model_joint(
    a: NDArray[np.float64], gamma: NDArray[np.float64], sigma: NDArray[np.float64]
) -> JointCovariance:
    """Joint covariance of (x, A^T x + e): C11 = Gamma, C12 = Gamma A, C22 = A^T Gamma A + Sigma."""
    gamma_a = gamma @ a
    c22 = a.T @ gamma_a + sigma
    return JointCovariance(c11=gamma, c12=gamma_a, c22=0.5 * (c22 + c22.T))
