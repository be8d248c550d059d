"""Assembly of the joint covariance blocks C11, C12 and C22.

All blocks are Gram matrices <f_j, C_X g_k> of weighted node clouds. The
route is picked from the structure of the members:

- separable: squared-exponential kernel and product test functions, two
  one-dimensional Grams multiplied entrywise
- translated: symmetric block of translates of one shape, entries shared by
  offset
- general: node de-duplication and sparse contraction
"""

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from distfree.errors import DimensionMismatchError, InvalidArgumentError
from distfree.kernels import (
    CovarianceKernel,
    NoiseModel,
    acquisition_noise,
    cross_gram,
    separable_gram,
    translated_gram,
)
from distfree.measurement import AssemblyMode, MeasurementSet, TestFunction
from distfree.posterior.joint import JointCovariance
from distfree.quadrature import QuadratureConfig

logger = logging.getLogger(__name__)


def kernel_gram(
    members_a: Sequence[TestFunction],
    members_b: Sequence[TestFunction],
    kernel: CovarianceKernel,
    quad: QuadratureConfig,
    mode: AssemblyMode = AssemblyMode.CONE,
    symmetric: bool = False,
) -> NDArray[np.float64]:
    """Gram matrix <a_j, C b_k> for the convolution operator of ``kernel``."""
    if kernel.variance == 0.0:
        return np.zeros((len(members_a), len(members_b)))

    collapsed = mode is AssemblyMode.POINT_LINE
    everyone = [*members_a, *members_b]
    if not collapsed and kernel.is_separable and all(f.factors is not None for f in everyone):
        logger.debug(f"Separable Gram route for {len(members_a)}x{len(members_b)}")
        return separable_gram(
            [f.axis_clouds(quad) for f in members_a],
            [f.axis_clouds(quad) for f in members_b],
            kernel.axis_factor,
            kernel.variance,
            symmetric=symmetric,
        )

    clouds_a = [f.cloud(quad, mode) for f in members_a]
    if symmetric and not collapsed and all(
        f.shape_key is not None and f.anchor is not None for f in members_a
    ):
        logger.debug(f"Translated Gram route for {len(members_a)} members")
        keys = [(f.shape_key, f.anchor) for f in members_a]
        return translated_gram(clouds_a, keys, kernel.cross)

    clouds_b = clouds_a if symmetric else [f.cloud(quad, mode) for f in members_b]
    return cross_gram(clouds_a, clouds_b, kernel.cross, symmetric=symmetric)


def _require_planar(measurements: MeasurementSet, name: str, kernel: CovarianceKernel) -> None:
    if measurements.domain_dim != 2:
        raise InvalidArgumentError(f"{name} must be a two-dimensional measurement set")
    if kernel.dimension != 2:
        raise InvalidArgumentError("the prior kernel must be two-dimensional")


def assemble_C11(
    interrogation: MeasurementSet,
    kernel: CovarianceKernel,
    quad: QuadratureConfig | None = None,
    mode: AssemblyMode = AssemblyMode.CONE,
) -> NDArray[np.float64]:
    """Prior covariance <phi_j, C_X phi_k> of the interrogation set.

    In point-line mode each phi_j is its mass at its anchor point, matching
    assemble_C12 in the same mode.
    """
    _require_planar(interrogation, "interrogation set", kernel)
    quad = quad or QuadratureConfig()
    members = list(interrogation)
    return kernel_gram(members, members, kernel, quad, mode, symmetric=True)


def assemble_C12(
    interrogation: MeasurementSet,
    acquisition: MeasurementSet,
    kernel: CovarianceKernel,
    quad: QuadratureConfig | None = None,
    mode: AssemblyMode = AssemblyMode.CONE,
) -> NDArray[np.float64]:
    """Cross covariance <phi_j, C_X A psi_k>.

    cone: pixel against cone; line: pixel against central line;
    point-line: pixel anchor point against central line.
    """
    _require_planar(interrogation, "interrogation set", kernel)
    _require_planar(acquisition, "acquisition set", kernel)
    quad = quad or QuadratureConfig()
    return kernel_gram(list(interrogation), list(acquisition), kernel, quad, mode)


def assemble_C22(
    acquisition: MeasurementSet,
    kernel: CovarianceKernel,
    noise: NoiseModel,
    screen: MeasurementSet,
    quad: QuadratureConfig | None = None,
    mode: AssemblyMode = AssemblyMode.CONE,
) -> NDArray[np.float64]:
    """Data covariance <A psi_j, C_X A psi_k> + <psi_j, C_E psi_k>.

    The prior part uses cone x cone nodes in cone mode and line x line nodes
    otherwise. Noise is independent across rotations.

    Raises:
        DimensionMismatchError: If the acquisition size is not a multiple of
            the screen set size
    """
    _require_planar(acquisition, "acquisition set", kernel)
    if len(acquisition) % len(screen):
        raise DimensionMismatchError(
            f"acquisition set of size {len(acquisition)} is not a whole number of "
            f"projections of {len(screen)} detectors"
        )
    quad = quad or QuadratureConfig()
    prior_mode = AssemblyMode.CONE if mode is AssemblyMode.CONE else AssemblyMode.LINE
    members = list(acquisition)
    prior = kernel_gram(members, members, kernel, quad, prior_mode, symmetric=True)
    rotations = len(acquisition) // len(screen)
    return prior + acquisition_noise(noise, screen, rotations, quad)


def assemble_joint(
    interrogation: MeasurementSet,
    acquisition: MeasurementSet,
    kernel: CovarianceKernel,
    noise: NoiseModel,
    screen: MeasurementSet,
    quad: QuadratureConfig | None = None,
    mode: AssemblyMode = AssemblyMode.CONE,
) -> JointCovariance:
    """All three blocks for one interrogation set and one acquisition."""
    quad = quad or QuadratureConfig()
    logger.info(
        f"Assembling joint covariance: n={len(interrogation)}, m={len(acquisition)}, "
        f"mode={mode.value}, kernel={kernel.family.value}"
    )
    return JointCovariance(
        c11=assemble_C11(interrogation, kernel, quad, mode),
        c12=assemble_C12(interrogation, acquisition, kernel, quad, mode),
        c22=assemble_C22(acquisition, kernel, noise, screen, quad, mode),
    )
