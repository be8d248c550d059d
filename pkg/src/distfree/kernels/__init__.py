"""Prior and noise covariance kernels."""

from distfree.kernels.covariance import CovarianceKernel, KernelFamily, kernel_eval
from distfree.kernels.gram import (
    cross_gram,
    merge_nodes,
    node_gram,
    separable_gram,
    translated_gram,
)
from distfree.kernels.mean import MeanFunction
from distfree.kernels.noise import NoiseKind, NoiseModel, acquisition_noise, noise_gram

__all__ = [
    "CovarianceKernel",
    "KernelFamily",
    "kernel_eval",
    "NoiseKind",
    "NoiseModel",
    "noise_gram",
    "acquisition_noise",
    "MeanFunction",
    "merge_nodes",
    "cross_gram",
    "node_gram",
    "separable_gram",
    "translated_gram",
]
