"""Measurement map x -> Phi(x) for classical functions."""

import numpy as np
from numpy.typing import NDArray

from distfree.measurement.functions import AssemblyMode, Evaluator, MeasurementSet
from distfree.quadrature import QuadratureConfig


def evaluate_measurement(
    measurements: MeasurementSet,
    f: Evaluator,
    quad: QuadratureConfig | None = None,
    mode: AssemblyMode = AssemblyMode.CONE,
) -> NDArray[np.float64]:
    """Integrate a classical function against every member of a measurement set.

    Args:
        measurements: Test functions phi_j
        f: Vectorized function on the members' domain
        quad: Quadrature node counts (defaults when None)
        mode: Node resolution of the members (see AssemblyMode)

    Returns:
        Vector with component j = integral of phi_j * f

    Raises:
        QuadratureError: If f is not finite at a node
    """
    quad = quad or QuadratureConfig()
    return np.array([cloud.integrate(f) for cloud in measurements.clouds(quad, mode)])
