"""Joint covariance of (Phi(X), Psi(B)) with its block partition."""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from distfree.errors import DimensionMismatchError, InvalidArgumentError

# Relative asymmetry tolerated in a full joint matrix
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class JointCovariance:
    """Blocks C11 (n x n), C12 (n x m) and C22 (m x m); C21 is C12 transposed."""

    c11: NDArray[np.float64]
    c12: NDArray[np.float64]
    c22: NDArray[np.float64]

    def __post_init__(self) -> None:
        n, m = self.c12.shape
        if self.c11.shape != (n, n):
            raise DimensionMismatchError(f"C11 has shape {self.c11.shape}, expected ({n}, {n})")
        if self.c22.shape != (m, m):
            raise DimensionMismatchError(f"C22 has shape {self.c22.shape}, expected ({m}, {m})")

    @classmethod
    def from_matrix(cls, matrix: NDArray[np.float64], n: int) -> "JointCovariance":
        """Split a full symmetric (n+m) x (n+m) matrix after its first n rows.

        Raises:
            InvalidArgumentError: If the matrix is not square and symmetric
        """
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidArgumentError(f"joint covariance must be square, got {matrix.shape}")
        if not 0 <= n <= matrix.shape[0]:
            raise DimensionMismatchError(f"block size {n} outside [0, {matrix.shape[0]}]")
        scale = max(np.abs(matrix).max(initial=0.0), np.finfo(float).tiny)
        if np.abs(matrix - matrix.T).max(initial=0.0) > SYMMETRY_TOL * scale:
            raise InvalidArgumentError("joint covariance is not symmetric")
        return cls(c11=matrix[:n, :n].copy(), c12=matrix[:n, n:].copy(), c22=matrix[n:, n:].copy())

    @property
    def n(self) -> int:
        return int(self.c12.shape[0])

    @property
    def m(self) -> int:
        return int(self.c12.shape[1])

    @property
    def c21(self) -> NDArray[np.float64]:
        return self.c12.T

    @property
    def matrix(self) -> NDArray[np.float64]:
        return np.block([[self.c11, self.c12], [self.c21, self.c22]])
