"""Joint covariance when the unknown is interrogated with A Psi itself.

Then C = [[Gamma, Gamma], [Gamma, Gamma + Sigma]] with Gamma = <A psi_j, C_X A psi_k>:
every linear problem reads as denoising of its own noiseless data.
"""

import logging

import numpy as np
from numpy.typing import NDArray

from distfree.errors import InternalConsistencyError
from distfree.geometry import FanBeamGeometry, acquisition_set
from distfree.kernels import CovarianceKernel, NoiseModel, acquisition_noise
from distfree.measurement import AssemblyMode, MeasurementSet
from distfree.posterior.assembly import assemble_C11, assemble_C12, assemble_C22
from distfree.posterior.joint import JointCovariance
from distfree.quadrature import QuadratureConfig

logger = logging.getLogger(__name__)

# Entrywise tolerance relative to the largest block entry
STRUCTURE_TOL = 1e-10


def check_denoising_structure(
    joint: JointCovariance, sigma: NDArray[np.float64], tol: float = STRUCTURE_TOL
) -> float:
    """Verify C11 = C12 = C21^T and C22 = C11 + Sigma.

    Returns:
        The largest relative deviation found

    Raises:
        InternalConsistencyError: If a deviation exceeds ``tol``
    """
    scale = max(np.abs(joint.c22).max(initial=0.0), np.finfo(float).tiny)
    deviations = {
        "C11 vs C12": np.abs(joint.c11 - joint.c12).max(initial=0.0),
        "C12 vs C21^T": np.abs(joint.c12 - joint.c21.T).max(initial=0.0),
        "C22 vs C11 + Sigma": np.abs(joint.c22 - joint.c11 - sigma).max(initial=0.0),
    }
    worst = max(deviations, key=deviations.get)
    relative = float(deviations[worst]) / scale
    if relative > tol:
        raise InternalConsistencyError(
            f"denoising structure violated: {worst} differs by {relative:.3g} (relative)"
        )
    return relative


def denoising_structure(
    screen: MeasurementSet,
    geometry: FanBeamGeometry,
    kernel: CovarianceKernel,
    noise: NoiseModel,
    quad: QuadratureConfig | None = None,
    mode: AssemblyMode = AssemblyMode.CONE,
    check: bool = True,
) -> JointCovariance:
    """Assemble the joint covariance with Phi = A Psi and check its structure.

    Each block goes through its own assembly routine, so a mismatch signals
    an assembly bug. With ``check=False`` the blocks are returned unverified.

    Raises:
        InternalConsistencyError: If the block identities fail
    """
    quad = quad or QuadratureConfig()
    acquisition = acquisition_set(geometry, screen)
    joint = JointCovariance(
        c11=assemble_C11(acquisition, kernel, quad, mode),
        c12=assemble_C12(acquisition, acquisition, kernel, quad, mode),
        c22=assemble_C22(acquisition, kernel, noise, screen, quad, mode),
    )
    if not check:
        return joint
    sigma = acquisition_noise(noise, screen, geometry.rotation_count, quad)
    deviation = check_denoising_structure(joint, sigma)
    logger.info(f"Denoising structure holds for m={joint.m} (max deviation {deviation:.2g})")
    return joint
