"""Stationary covariance kernels c(r) defining convolution covariance operators."""

import math
from enum import Enum
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field


class KernelFamily(str, Enum):
    """Supported stationary kernel profiles."""

    SQUARED_EXPONENTIAL = "squared-exponential"
    EXPONENTIAL = "exponential"


class CovarianceKernel(BaseModel):
    """Stationary kernel c(r) = variance * profile(|r| / length_scale).

    squared-exponential: variance * exp(-|r|^2 / (2 length_scale^2))
    exponential:         variance * exp(-|r| / length_scale)
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    family: KernelFamily = Field(KernelFamily.SQUARED_EXPONENTIAL, description="Kernel profile")
    variance: float = Field(1.0, ge=0.0, description="c(0); zero gives the null prior")
    length_scale: float = Field(0.12, gt=0.0, description="Correlation length")
    dimension: Literal[1, 2] = Field(2, description="Dimension of the displacement")

    @property
    def is_separable(self) -> bool:
        """Whether c factorizes into a product of one-dimensional kernels."""
        return self.family is KernelFamily.SQUARED_EXPONENTIAL

    def from_distance(self, distance: ArrayLike) -> NDArray[np.float64]:
        """Evaluate the kernel at Euclidean distances."""
        d = np.asarray(distance, dtype=np.float64)
        if self.family is KernelFamily.SQUARED_EXPONENTIAL:
            return self.variance * np.exp(-0.5 * (d / self.length_scale) ** 2)
        return self.variance * np.exp(-np.abs(d) / self.length_scale)

    def reach(self, tail: float) -> float:
        """Distance beyond which the kernel stays below tail * variance."""
        if self.family is KernelFamily.SQUARED_EXPONENTIAL:
            return self.length_scale * math.sqrt(2.0 * math.log(1.0 / tail))
        return self.length_scale * math.log(1.0 / tail)

    def __call__(self, r: ArrayLike) -> NDArray[np.float64]:
        """Evaluate at displacements: shape (...) in 1-D, (..., 2) in 2-D."""
        r = np.asarray(r, dtype=np.float64)
        if self.dimension == 1:
            return self.from_distance(np.abs(r))
        return self.from_distance(np.hypot(r[..., 0], r[..., 1]))

    def cross(self, x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
        """Matrix of c(x_i - y_j) for point arrays x and y."""
        if x.ndim == 1:
            return self.from_distance(np.abs(x[:, None] - y[None, :]))
        return self(x[:, None, :] - y[None, :, :])

    def axis_factor(self, x: NDArray[np.float64], y: NDArray[np.float64]) -> NDArray[np.float64]:
        """Unit-variance one-dimensional factor of a separable kernel, as a matrix.

        c(x - y) = variance * prod over axes of axis_factor(x_a, y_a).
        """
        d = x[:, None] - y[None, :]
        return np.exp(-0.5 * (d / self.length_scale) ** 2)


def kernel_eval(kernel: CovarianceKernel, r: ArrayLike) -> float | NDArray[np.float64]:
    """Evaluate c(r) for a single displacement or an array of them.

    Args:
        kernel: The covariance kernel
        r: A scalar (1-D kernel), a 2-vector (2-D kernel) or an array of either

    Returns:
        A float for a single displacement, otherwise an array
    """
    value = kernel(r)
    return float(value) if np.ndim(value) == 0 else value
