"""Fan-beam acquisition geometry and the pushforward psi -> A psi.

Rotations turn the source and the screen about the window centre; the object
stays fixed. For rotation k the source sits at

    x0_k = c + d * (cos(phi_k + pi), sin(phi_k + pi))

and the central ray points along beta_k = phi_k. A screen angle theta in
[-alpha, alpha] labels the ray x0_k + t * (cos(beta_k + theta), sin(beta_k + theta)).
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Self

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from distfree.errors import InvalidArgumentError
from distfree.measurement import AssemblyMode, MeasurementSet, TestFunction, bump_1d
from distfree.quadrature import (
    Box,
    ConeRegion,
    Interval,
    LineSegment,
    QuadratureCloud,
    QuadratureConfig,
    cone_cloud,
    gauss_rule,
    ray_box_interval,
    segment_cloud,
)

logger = logging.getLogger(__name__)

# Slack when checking that a device function fits on the screen
_SCREEN_TOL = 1e-12


def uniform_rotations(count: int) -> tuple[float, ...]:
    """``count`` angles equally spaced over [0, 2 pi)."""
    if count < 1:
        raise InvalidArgumentError(f"rotation count must be at least 1, got {count}")
    return tuple(2.0 * math.pi * k / count for k in range(count))


def _point_box_distance(point: NDArray[np.float64], box: Box) -> float:
    dx = max(box.x_lo - point[0], 0.0, point[0] - box.x_hi)
    dy = max(box.y_lo - point[1], 0.0, point[1] - box.y_hi)
    return math.hypot(dx, dy)


def wrap_angle(angle: NDArray[np.float64]) -> NDArray[np.float64]:
    """Map angles to (-pi, pi]."""
    return math.pi - np.mod(math.pi - angle, 2.0 * math.pi)


class FanBeamGeometry(BaseModel):
    """Single point source, circular screen arc and a set of rotations."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    source_distance: float = Field(1.2, gt=0, description="Distance d from window centre to source")
    screen_radius: float = Field(2.4, gt=0, description="Screen arc radius R about the source")
    half_opening: float = Field(0.45, gt=0, lt=math.pi / 2, description="Half opening alpha")
    detector_count: int = Field(32, ge=1, description="Detectors m_d on the screen")
    detector_fill: float = Field(0.95, gt=0, le=1, description="Device support / detector width")
    detector_peak: float = Field(1.0, gt=0, description="Peak value of device functions")
    rotation_angles: tuple[float, ...] = Field(
        default_factory=lambda: uniform_rotations(12), description="Rotation angles phi_k"
    )
    window: tuple[float, float, float, float] = Field(
        (0.0, 1.0, 0.0, 1.0), description="Imaging window (x_lo, x_hi, y_lo, y_hi)"
    )
    object_center: tuple[float, float] = Field((0.5, 0.5), description="Centre of object disc")
    object_radius: float = Field(0.45, gt=0, description="Radius of object disc")

    @field_validator("rotation_angles")
    @classmethod
    def check_rotations(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if not v:
            raise ValueError("at least one rotation angle is required")
        return v

    @model_validator(mode="after")
    def check_configuration(self) -> Self:
        """Source outside the window and full coverage of the object disc."""
        window = self.window_box
        if not window.contains_box(Box.around(self.object_center, self.object_radius)):
            raise ValueError("object disc must lie inside the window")
        disc = np.asarray(self.object_center)
        for k in range(self.rotation_count):
            x0 = self.source_position(k)
            if bool(window.contains(x0)):
                raise ValueError(f"source lies inside the window at rotation {k}")
            offset = disc - x0
            distance = float(np.hypot(*offset))
            if distance <= self.object_radius:
                raise ValueError(f"source lies inside the object disc at rotation {k}")
            tilt = abs(float(wrap_angle(np.arctan2(offset[1], offset[0]) - self.axis_angle(k))))
            spread = math.asin(self.object_radius / distance)
            if tilt + spread > self.half_opening + 1e-12:
                raise ValueError(
                    f"fan of half-opening {self.half_opening:.4g} does not cover the object "
                    f"disc at rotation {k} (needs {tilt + spread:.4g})"
                )
            if self.screen_radius < distance + self.object_radius:
                raise ValueError(
                    f"screen radius {self.screen_radius:.4g} does not reach past the object "
                    f"disc at rotation {k} (needs {distance + self.object_radius:.4g})"
                )
        return self

    @classmethod
    def with_uniform_rotations(cls, rotation_count: int, **kwargs: Any) -> "FanBeamGeometry":
        return cls(rotation_angles=uniform_rotations(rotation_count), **kwargs)

    @property
    def window_box(self) -> Box:
        return Box(*self.window)

    @property
    def center(self) -> tuple[float, float]:
        return self.window_box.center

    @property
    def rotation_count(self) -> int:
        return len(self.rotation_angles)

    @property
    def measurement_count(self) -> int:
        return self.detector_count * self.rotation_count

    def axis_angle(self, rotation_index: int) -> float:
        """Direction beta_k of the central ray."""
        return float(self.rotation_angles[rotation_index])

    def source_position(self, rotation_index: int) -> NDArray[np.float64]:
        beta = self.axis_angle(rotation_index)
        cx, cy = self.center
        return np.array(
            [cx - self.source_distance * math.cos(beta), cy - self.source_distance * math.sin(beta)]
        )

    def screen_angle(self, rotation_index: int, points: ArrayLike) -> NDArray[np.float64]:
        """Screen parameter theta(x) of the ray through each point."""
        p = np.asarray(points, dtype=np.float64) - self.source_position(rotation_index)
        return wrap_angle(np.arctan2(p[..., 1], p[..., 0]) - self.axis_angle(rotation_index))

    def ray_directions(self, rotation_index: int, theta: ArrayLike) -> NDArray[np.float64]:
        angle = self.axis_angle(rotation_index) + np.asarray(theta, dtype=np.float64)
        return np.stack([np.cos(angle), np.sin(angle)], axis=-1)

    def ray_extent(
        self, rotation_index: int, theta: ArrayLike
    ) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Arclength range [t_lo, t_hi] of each ray inside the window and the screen."""
        directions = np.atleast_2d(self.ray_directions(rotation_index, theta))
        enter, leave = ray_box_interval(self.source_position(rotation_index), directions, self.window_box)
        return np.maximum(enter, 0.0), np.minimum(leave, self.screen_radius)

    @property
    def detector_intervals(self) -> tuple[Interval, ...]:
        """Equal-width detector intervals s_k partitioning [-alpha, alpha]."""
        edges = np.linspace(-self.half_opening, self.half_opening, self.detector_count + 1)
        return tuple(Interval(float(lo), float(hi)) for lo, hi in zip(edges[:-1], edges[1:]))

    def summary(self) -> dict[str, Any]:
        """Structured description for logs and geometry.txt."""
        window = self.window_box
        clearance = min(
            _point_box_distance(self.source_position(k), window) for k in range(self.rotation_count)
        )
        return {
            "source_distance": self.source_distance,
            "screen_radius": self.screen_radius,
            "half_opening": self.half_opening,
            "detector_count": self.detector_count,
            "detector_fill": self.detector_fill,
            "detector_width": 2.0 * self.half_opening / self.detector_count,
            "rotation_count": self.rotation_count,
            "rotation_angles": list(self.rotation_angles),
            "measurement_count": self.measurement_count,
            "window": list(self.window),
            "object_center": list(self.object_center),
            "object_radius": self.object_radius,
            "source_clearance": clearance,
        }


@dataclass(frozen=True, eq=False, kw_only=True)
class PushedTestFunction(TestFunction):
    """A psi_k: x -> psi_k(theta(x)) / |x - x0_k| on the cone Gamma_k.

    ``support`` is the bounding box of the cone clipped to the window.
    ``central_line`` is None when the central ray misses the window.
    """

    base: TestFunction
    geometry: FanBeamGeometry
    rotation_index: int
    cone: ConeRegion
    central_line: LineSegment | None

    def cloud(
        self, quad: QuadratureConfig, mode: AssemblyMode = AssemblyMode.CONE
    ) -> QuadratureCloud:
        if mode is AssemblyMode.CONE:
            nodes = cone_cloud(self.cone, gauss_rule(quad.cone_radial), gauss_rule(quad.cone_angular))
            return nodes.weighted(self.evaluator(nodes.points)) if nodes.size else nodes
        if self.central_line is None:
            return QuadratureCloud.empty(2)
        # Narrow-cone limit: the angular mass of psi rides on the central line
        nodes = segment_cloud(self.central_line, gauss_rule(quad.line_order))
        return nodes.weighted(np.full(nodes.size, self.angular_mass(quad)))

    def angular_mass(self, quad: QuadratureConfig) -> float:
        """m_k, the integral of psi_k over the screen angle."""
        return self.base.mass(quad)


def push_forward(
    geometry: FanBeamGeometry, psi: TestFunction, rotation_index: int
) -> PushedTestFunction:
    """Push a screen device function through the fan-beam forward map.

    Args:
        geometry: Acquisition geometry
        psi: One-dimensional test function on the screen angle
        rotation_index: Index into geometry.rotation_angles

    Returns:
        The pushed function with its cone and central line

    Raises:
        InvalidArgumentError: If psi is not supported in [-alpha, alpha] or
            the rotation index is out of range
    """
    if psi.dim != 1:
        raise InvalidArgumentError("only one-dimensional screen functions can be pushed forward")
    alpha = geometry.half_opening
    if psi.support.lo < -alpha - _SCREEN_TOL or psi.support.hi > alpha + _SCREEN_TOL:
        raise InvalidArgumentError(
            f"device support [{psi.support.lo:.6g}, {psi.support.hi:.6g}] leaves the screen "
            f"[-{alpha:.6g}, {alpha:.6g}]"
        )
    if not 0 <= rotation_index < geometry.rotation_count:
        raise InvalidArgumentError(
            f"rotation index {rotation_index} out of range [0, {geometry.rotation_count})"
        )

    x0 = geometry.source_position(rotation_index)
    beta = geometry.axis_angle(rotation_index)
    window = geometry.window_box
    cone = ConeRegion(
        apex=(float(x0[0]), float(x0[1])),
        angle_lo=beta + psi.support.lo,
        angle_hi=beta + psi.support.hi,
        radius=geometry.screen_radius,
        clip_box=window,
    )

    t_lo, t_hi = geometry.ray_extent(rotation_index, [psi.support.center])
    central_line = None
    if t_hi[0] > t_lo[0]:
        direction = geometry.ray_directions(rotation_index, psi.support.center)
        start, end = x0 + t_lo[0] * direction, x0 + t_hi[0] * direction
        central_line = LineSegment((float(start[0]), float(start[1])), (float(end[0]), float(end[1])))

    radius = geometry.screen_radius

    def evaluator(points: NDArray[np.float64]) -> NDArray[np.float64]:
        offsets = points - x0
        t = np.hypot(offsets[..., 0], offsets[..., 1])
        theta = geometry.screen_angle(rotation_index, points)
        inside = (t > 0.0) & (t < radius) & psi.support.contains(theta)
        values = psi(theta)
        return np.divide(values, t, out=np.zeros_like(t), where=inside)

    support = cone.bounding_box()
    return PushedTestFunction(
        evaluator=evaluator,
        support=support,
        label=f"A{psi.label or 'psi'}@rot{rotation_index}",
        base=psi,
        geometry=geometry,
        rotation_index=rotation_index,
        cone=cone,
        central_line=central_line,
    )


def detector_set(geometry: FanBeamGeometry) -> MeasurementSet:
    """Device functions psi_k, one bump centred in each detector interval."""
    return MeasurementSet.of(
        [
            bump_1d(s.center, 0.5 * geometry.detector_fill * s.length, peak=geometry.detector_peak)
            for s in geometry.detector_intervals
        ]
    )


def acquisition_set(
    geometry: FanBeamGeometry, detectors: MeasurementSet | None = None
) -> MeasurementSet:
    """The full set A Psi, ordered rotation-major then detector.

    Uses detector_set(geometry) unless other screen functions are given.
    """
    detectors = detectors or detector_set(geometry)
    members = [
        push_forward(geometry, psi, k) for k in range(geometry.rotation_count) for psi in detectors
    ]
    logger.info(
        f"Acquisition set: {geometry.rotation_count} rotations x {len(detectors)} detectors "
        f"= {len(members)} measurements"
    )
    return MeasurementSet.of(members)
