"""Fan-beam geometry and the forward pushforward of device functions."""

from distfree.geometry.fanbeam import (
    FanBeamGeometry,
    PushedTestFunction,
    acquisition_set,
    detector_set,
    push_forward,
    uniform_rotations,
    wrap_angle,
)
from distfree.geometry.projection import (
    RayBreakpoints,
    disc_pairing,
    line_integral_data,
    ray_knots,
)

__all__ = [
    "FanBeamGeometry",
    "PushedTestFunction",
    "uniform_rotations",
    "wrap_angle",
    "push_forward",
    "detector_set",
    "acquisition_set",
    "RayBreakpoints",
    "disc_pairing",
    "line_integral_data",
    "ray_knots",
]
