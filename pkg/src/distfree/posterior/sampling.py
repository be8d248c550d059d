"""Draws from N(0, C) for a joint covariance."""

import numpy as np
from numpy.typing import NDArray

from distfree.errors import InvalidArgumentError
from distfree.posterior.conditioning import CholeskySolver
from distfree.posterior.joint import JointCovariance


def sample_joint(joint: JointCovariance, seed: int, count: int = 1) -> NDArray[np.float64]:
    """Sample (Phi(X), Psi(B)) jointly.

    Args:
        joint: Joint covariance
        seed: Seed for numpy's default generator
        count: Number of samples

    Returns:
        Array of shape (n + m, count), identical for identical seeds

    Raises:
        IllConditionedCovarianceError: If C cannot be factorized
    """
    if count < 1:
        raise InvalidArgumentError(f"sample count must be at least 1, got {count}")
    factor = CholeskySolver(joint.matrix).lower_factor
    rng = np.random.default_rng(seed)
    return factor @ rng.standard_normal((factor.shape[0], count))


def sample_gaussian(
    covariance: NDArray[np.float64], rng: np.random.Generator, mean: NDArray[np.float64] | None = None
) -> NDArray[np.float64]:
    """One draw from N(mean, covariance) using a jittered Cholesky factor."""
    factor = CholeskySolver(covariance).lower_factor
    draw = factor @ rng.standard_normal(factor.shape[0])
    return draw if mean is None else mean + draw
