"""Noise covariance model C_E on the detector screen."""

from enum import Enum
from typing import Self

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from distfree.kernels.covariance import CovarianceKernel
from distfree.kernels.gram import cross_gram
from distfree.measurement import MeasurementSet
from distfree.quadrature import QuadratureConfig, gauss_rule, interval_cloud


class NoiseKind(str, Enum):
    """Noise covariance families."""

    WHITE = "white"
    KERNEL = "kernel"


class NoiseModel(BaseModel):
    """Noise covariance operator on the screen parameter.

    White noise has C_E = white_level * identity, so the noise Gram of two
    device functions is white_level times their L2 inner product. Kernel noise
    uses a one-dimensional stationary kernel on the screen angle.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: NoiseKind = Field(NoiseKind.WHITE, description="Noise family")
    white_level: float = Field(0.0, ge=0.0, description="sigma_e^2 for white noise")
    kernel: CovarianceKernel | None = Field(None, description="Screen kernel for kind=kernel")

    @model_validator(mode="after")
    def check_kind(self) -> Self:
        """Kernel noise needs a one-dimensional kernel."""
        if self.kind is NoiseKind.KERNEL:
            if self.kernel is None:
                raise ValueError("kernel noise requires a kernel")
            if self.kernel.dimension != 1:
                raise ValueError("noise kernel must be one-dimensional (screen angle)")
        return self

    @classmethod
    def white(cls, level: float) -> "NoiseModel":
        return cls(kind=NoiseKind.WHITE, white_level=level)

    @property
    def is_zero(self) -> bool:
        if self.kind is NoiseKind.WHITE:
            return self.white_level == 0.0
        return self.kernel is not None and self.kernel.variance == 0.0


def noise_gram(
    noise: NoiseModel, detectors: MeasurementSet, quad: QuadratureConfig
) -> NDArray[np.float64]:
    """Noise Gram matrix <psi_j, C_E psi_k> of screen device functions.

    Args:
        noise: Noise model
        detectors: One-dimensional device functions
        quad: Quadrature node counts (detector_order is used)

    Returns:
        Symmetric (m, m) matrix; exactly diagonal for white noise and
        disjoint supports
    """
    m = len(detectors)
    if noise.kind is NoiseKind.KERNEL:
        clouds = detectors.clouds(quad)
        return cross_gram(clouds, clouds, noise.kernel.cross, symmetric=True)

    sigma = np.zeros((m, m))
    if noise.white_level == 0.0:
        return sigma
    rule = gauss_rule(quad.detector_order)
    for j in range(m):
        for k in range(j, m):
            overlap = detectors[j].support.intersection(detectors[k].support)
            if overlap is None:
                continue
            cloud = interval_cloud(overlap.lo, overlap.hi, rule)
            value = noise.white_level * cloud.integrate(
                lambda t, a=detectors[j], b=detectors[k]: a(t) * b(t)
            )
            sigma[j, k] = value
            sigma[k, j] = value
    return sigma


def acquisition_noise(
    noise: NoiseModel, detectors: MeasurementSet, rotation_count: int, quad: QuadratureConfig
) -> NDArray[np.float64]:
    """Noise covariance of the full acquisition, independent across rotations.

    Rows are ordered rotation-major, matching the acquisition set.
    """
    return np.kron(np.eye(rotation_count), noise_gram(noise, detectors, quad))
