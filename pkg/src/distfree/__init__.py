"""distfree: discretization-free Bayesian inversion for linear Gaussian inverse problems."""

from distfree.config import RunConfig, Settings, get_settings
from distfree.errors import (
    ConfigError,
    DimensionMismatchError,
    DistFreeError,
    IllConditionedCovarianceError,
    InternalConsistencyError,
    InvalidArgumentError,
    QuadratureError,
)
from distfree.geometry import FanBeamGeometry, acquisition_set, detector_set, line_integral_data
from distfree.kernels import CovarianceKernel, KernelFamily, NoiseModel
from distfree.measurement import AssemblyMode, MeasurementSet, PixelGrid, TestFunction, pixel_bumps
from distfree.posterior import (
    JointCovariance,
    PosteriorResult,
    assemble_joint,
    condition,
    reinterrogate,
)
from distfree.quadrature import QuadratureConfig

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "RunConfig",
    "Settings",
    "get_settings",
    "DistFreeError",
    "InvalidArgumentError",
    "DimensionMismatchError",
    "QuadratureError",
    "IllConditionedCovarianceError",
    "InternalConsistencyError",
    "ConfigError",
    "QuadratureConfig",
    "CovarianceKernel",
    "KernelFamily",
    "NoiseModel",
    "AssemblyMode",
    "TestFunction",
    "MeasurementSet",
    "PixelGrid",
    "pixel_bumps",
    "FanBeamGeometry",
    "detector_set",
    "acquisition_set",
    "line_integral_data",
    "JointCovariance",
    "PosteriorResult",
    "assemble_joint",
    "condition",
    "reinterrogate",
]
