"""Synthetic acquisition data and reconstruction targets."""

import logging

import numpy as np
from numpy.typing import NDArray

from distfree.errors import InvalidArgumentError
from distfree.geometry import FanBeamGeometry, detector_set, line_integral_data
from distfree.kernels import NoiseModel, acquisition_noise
from distfree.measurement import AssemblyMode, MeasurementSet, evaluate_measurement
from distfree.phantom.blobs import Phantom
from distfree.posterior import sample_gaussian
from distfree.quadrature import QuadratureConfig

logger = logging.getLogger(__name__)


def generate_data(
    phantom: Phantom,
    geometry: FanBeamGeometry,
    noise: NoiseModel,
    seed: int,
    quad: QuadratureConfig | None = None,
    clean: NDArray[np.float64] | None = None,
) -> NDArray[np.float64]:
    """Noiseless line-integral data plus a draw from N(0, Sigma).

    Args:
        phantom: Ground truth
        geometry: Acquisition geometry
        noise: Noise model on the screen
        seed: Seed of the noise draw
        quad: Quadrature node counts
        clean: Precomputed noiseless data (recomputed when None)

    Returns:
        Data vector, rotation-major; equal to the noiseless data for zero noise
    """
    quad = quad or QuadratureConfig()
    if clean is None:
        clean = line_integral_data(geometry, phantom, quad)
    if noise.is_zero:
        return clean.copy()
    sigma = acquisition_noise(noise, detector_set(geometry), geometry.rotation_count, quad)
    return clean + sample_gaussian(sigma, np.random.default_rng(seed))


def ground_truth_measurement(
    phantom: Phantom,
    interrogation: MeasurementSet,
    quad: QuadratureConfig | None = None,
    mode: AssemblyMode = AssemblyMode.CONE,
) -> NDArray[np.float64]:
    """<phi_j, F> for the reconstruction target."""
    return evaluate_measurement(interrogation, phantom, quad, mode)


def calibrate_white_noise(
    clean: NDArray[np.float64],
    relative_level: float,
    geometry: FanBeamGeometry,
    quad: QuadratureConfig | None = None,
) -> NoiseModel:
    """White noise whose per-detector standard deviation is a fraction of the peak datum.

    The noise Gram diagonal is sigma_e^2 * integral psi^2, so sigma_e^2 is
    chosen to make sqrt of that diagonal equal relative_level * max|clean|.

    Raises:
        InvalidArgumentError: If relative_level is negative
    """
    if relative_level < 0:
        raise InvalidArgumentError(f"relative noise level must be >= 0, got {relative_level}")
    peak = float(np.abs(clean).max(initial=0.0))
    if relative_level == 0.0 or peak == 0.0:
        return NoiseModel.white(0.0)
    quad = quad or QuadratureConfig()
    unit = acquisition_noise(NoiseModel.white(1.0), detector_set(geometry), 1, quad)
    level = (relative_level * peak) ** 2 / float(np.diag(unit).max())
    logger.info(f"Calibrated white noise level {level:.4g} ({relative_level:.2%} of peak {peak:.4g})")
    return NoiseModel.white(level)
