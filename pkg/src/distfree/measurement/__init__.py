"""Test functions, measurement sets and pixel grids."""

from distfree.measurement.evaluate import evaluate_measurement
from distfree.measurement.functions import (
    AssemblyMode,
    Evaluator,
    MeasurementSet,
    TestFunction,
    bump_1d,
    cos2_profile,
)
from distfree.measurement.grid import PixelGrid, pixel_bumps

__all__ = [
    "AssemblyMode",
    "Evaluator",
    "TestFunction",
    "MeasurementSet",
    "bump_1d",
    "cos2_profile",
    "PixelGrid",
    "pixel_bumps",
    "evaluate_measurement",
]
