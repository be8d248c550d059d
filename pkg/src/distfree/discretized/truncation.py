"""Covariance blocks of the truncated prior C_X^n = (P^n)* C_X P^n."""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from distfree.discretized.basis import TruncationBasis
from distfree.kernels import (
    CovarianceKernel,
    NoiseModel,
    acquisition_noise,
    merge_nodes,
    node_gram,
)
from distfree.measurement import AssemblyMode, MeasurementSet
from distfree.posterior import kernel_gram
from distfree.quadrature import QuadratureConfig, composite_rule

logger = logging.getLogger(__name__)

# Per-panel order of the shared grid used when the kernel does not factorize
_GRID_ORDER = 8


@dataclass(frozen=True, eq=False)
class TruncatedCovariance:
    """Coefficients <phi_l, C_X phi_l'> of the prior on the truncation basis."""

    basis: TruncationBasis
    kernel_coeffs: NDArray[np.float64]

    @property
    def size(self) -> int:
        return self.basis.size


def _shared_grid(basis: TruncationBasis) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Tensor grid on the window with the (nodes x modes) weighted mode values."""
    rule = composite_rule(_GRID_ORDER, max(2 * basis.truncation_level + 1, 8))
    window = basis.window
    x, wx = rule.mapped(window.x_lo, window.x_hi)
    y, wy = rule.mapped(window.y_lo, window.y_hi)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    points = np.column_stack([xx.ravel(), yy.ravel()])
    return points, basis.values(points) * np.outer(wx, wy).ravel()[:, None]


def kernel_coeffs(basis: TruncationBasis, kernel: CovarianceKernel) -> TruncatedCovariance:
    """Prior covariance on the basis.

    Squared-exponential kernels factorize over the axes and use the basis
    rule; other kernels are integrated on a shared tensor grid.
    """
    if kernel.variance == 0.0:
        return TruncatedCovariance(basis=basis, kernel_coeffs=np.zeros((basis.size, basis.size)))
    if kernel.is_separable:
        members = list(basis.members)
        coeffs = kernel_gram(members, members, kernel, QuadratureConfig(), symmetric=True)
    else:
        points, weights = _shared_grid(basis)
        coeffs = node_gram(points, weights, points, weights, kernel.cross, symmetric=True)
    return TruncatedCovariance(basis=basis, kernel_coeffs=coeffs)


def _pushed_mode(mode: AssemblyMode) -> AssemblyMode:
    return AssemblyMode.CONE if mode is AssemblyMode.CONE else AssemblyMode.LINE


def truncated_C22(
    basis: TruncationBasis,
    acquisition: MeasurementSet,
    kernel: CovarianceKernel,
    noise: NoiseModel,
    screen: MeasurementSet,
    quad: QuadratureConfig | None = None,
    mode: AssemblyMode = AssemblyMode.CONE,
    covariance: TruncatedCovariance | None = None,
) -> NDArray[np.float64]:
    """G^T K G + noise Gram, with G[l, k] = <phi_l, A psi_k>.

    Args:
        basis: Truncation basis
        acquisition: Pushed device functions A Psi
        kernel: Prior kernel
        noise: Noise model
        screen: Device functions Psi
        quad: Quadrature node counts
        mode: Cone or line resolution of A Psi
        covariance: Precomputed kernel coefficients for this basis
    """
    quad = quad or QuadratureConfig()
    covariance = covariance or kernel_coeffs(basis, kernel)
    g = basis.coefficients(acquisition.clouds(quad, _pushed_mode(mode)))
    prior = g.T @ covariance.kernel_coeffs @ g
    rotations = len(acquisition) // len(screen)
    return 0.5 * (prior + prior.T) + acquisition_noise(noise, screen, rotations, quad)


def interrogation_basis_gram(
    basis: TruncationBasis,
    interrogation: MeasurementSet,
    kernel: CovarianceKernel,
    quad: QuadratureConfig,
    mode: AssemblyMode = AssemblyMode.CONE,
) -> NDArray[np.float64]:
    """<phi_j, C_X phi_l> between interrogation functions and basis modes."""
    if kernel.variance == 0.0:
        return np.zeros((len(interrogation), basis.size))
    separable = kernel.is_separable and all(f.factors is not None for f in interrogation)
    if separable and mode is not AssemblyMode.POINT_LINE:
        return kernel_gram(list(interrogation), list(basis.members), kernel, quad, mode)
    points_a, select_a = merge_nodes(interrogation.clouds(quad, mode))
    points_b, weights_b = _shared_grid(basis)
    return node_gram(points_a, select_a, points_b, weights_b, kernel.cross)


def truncated_C12(
    basis: TruncationBasis,
    interrogation: MeasurementSet,
    acquisition: MeasurementSet,
    kernel: CovarianceKernel,
    quad: QuadratureConfig | None = None,
    mode: AssemblyMode = AssemblyMode.CONE,
) -> NDArray[np.float64]:
    """<phi_j, C_X P^n A psi_k> = sum_l <phi_j, C_X phi_l> <phi_l, A psi_k>."""
    quad = quad or QuadratureConfig()
    left = interrogation_basis_gram(basis, interrogation, kernel, quad, mode)
    g = basis.coefficients(acquisition.clouds(quad, _pushed_mode(mode)))
    return left @ g


def truncated_C11(
    basis: TruncationBasis,
    interrogation: MeasurementSet,
    kernel: CovarianceKernel,
    quad: QuadratureConfig | None = None,
    mode: AssemblyMode = AssemblyMode.CONE,
    covariance: TruncatedCovariance | None = None,
) -> NDArray[np.float64]:
    """<phi_j, C_X^n phi_k> = H^T K H with H[l, j] = <phi_l, phi_j>.

    Equals the untruncated C11 whenever the phi_j lie in the span of the basis.
    """
    quad = quad or QuadratureConfig()
    covariance = covariance or kernel_coeffs(basis, kernel)
    h = basis.coefficients(interrogation.clouds(quad, mode))
    c11 = h.T @ covariance.kernel_coeffs @ h
    return 0.5 * (c11 + c11.T)
