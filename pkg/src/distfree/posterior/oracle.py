"""Conditional moments from the joint precision matrix.

Independent of the Schur-complement path in conditioning.py: with
Q = C^-1 partitioned like C, the first block given the second has
covariance Q11^-1 and mean -Q11^-1 Q12 z.
"""

import numpy as np
from numpy.typing import NDArray

from distfree.errors import DimensionMismatchError


def dense_conditional_moments(
    matrix: NDArray[np.float64], n: int, z: NDArray[np.float64]
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Mean and covariance of the first ``n`` components given the rest equal z."""
    matrix = np.asarray(matrix, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (matrix.shape[0] - n,):
        raise DimensionMismatchError(f"conditioning vector has shape {z.shape}")
    precision = np.linalg.inv(matrix)
    q11 = precision[:n, :n]
    q12 = precision[:n, n:]
    covariance = np.linalg.inv(q11)
    mean = -covariance @ (q12 @ z)
    return mean, 0.5 * (covariance + covariance.T)
