"""Smooth blob phantoms supported on the object disc."""

import math
from typing import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from distfree.measurement import PixelGrid, cos2_profile

# Slack for blobs touching the disc boundary
_DISC_TOL = 1e-12


class Blob(BaseModel):
    """amplitude * cos^2(pi |x - c| / (2 r)) on the disc |x - c| < r."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    center: tuple[float, float]
    radius: float = Field(..., gt=0)
    amplitude: float = 1.0

    def __call__(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        d = np.hypot(points[..., 0] - self.center[0], points[..., 1] - self.center[1])
        return self.amplitude * cos2_profile(d, 0.0, self.radius)

    def to_list(self) -> list[float]:
        return [self.center[0], self.center[1], self.radius, self.amplitude]


class Phantom(BaseModel):
    """Sum of blobs, zero outside the support disc."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    blobs: tuple[Blob, ...] = ()
    disc_center: tuple[float, float] = (0.5, 0.5)
    disc_radius: float = Field(0.45, gt=0)

    @model_validator(mode="after")
    def check_blobs_in_disc(self) -> Self:
        for i, blob in enumerate(self.blobs):
            reach = math.dist(blob.center, self.disc_center) + blob.radius
            if reach > self.disc_radius + _DISC_TOL:
                raise ValueError(
                    f"blob {i + 1} reaches {reach:.4g} from the disc centre, beyond radius {self.disc_radius:.4g}"
                )
        return self

    def __call__(self, points: ArrayLike) -> NDArray[np.float64]:
        return eval_phantom(self, points)

    @classmethod
    def default(cls) -> "Phantom":
        """Two overlapping blobs used by the example configuration."""
        return cls(
            blobs=(
                Blob(center=(0.40, 0.55), radius=0.15, amplitude=1.0),
                Blob(center=(0.62, 0.42), radius=0.12, amplitude=0.6),
            )
        )

    def rotated(self, angle: float, about: tuple[float, float] | None = None) -> "Phantom":
        """The phantom turned counter-clockwise by angle about a point (the disc centre by default)."""
        pivot = np.asarray(about if about is not None else self.disc_center, dtype=np.float64)
        c, s = math.cos(angle), math.sin(angle)

        def turn(point: tuple[float, float]) -> tuple[float, float]:
            dx, dy = point[0] - pivot[0], point[1] - pivot[1]
            return (float(pivot[0] + c * dx - s * dy), float(pivot[1] + s * dx + c * dy))

        blobs = tuple(b.model_copy(update={"center": turn(b.center)}) for b in self.blobs)
        return Phantom(blobs=blobs, disc_center=turn(self.disc_center), disc_radius=self.disc_radius)

    def ray_breakpoints(self, origin: ArrayLike, directions: ArrayLike) -> NDArray[np.float64]:
        """Arclengths where each ray crosses a blob rim or the support disc.

        Returns shape (q, 2 * (len(blobs) + 1)); NaN where a ray misses a circle.
        The phantom is analytic along a ray between consecutive crossings.
        """
        o = np.asarray(origin, dtype=np.float64)
        d = np.atleast_2d(np.asarray(directions, dtype=np.float64))
        columns = []
        for center, radius in self._circles():
            offset = o - np.asarray(center, dtype=np.float64)
            b = d @ offset
            disc = b**2 - (offset @ offset - radius**2)
            root = np.sqrt(np.where(disc > 0.0, disc, np.nan))
            columns += [-b - root, -b + root]
        return np.column_stack(columns)

    def tangent_angles(self, origin: ArrayLike) -> NDArray[np.float64]:
        """Absolute directions of the rays from origin grazing a blob rim or the support disc."""
        ox, oy = np.asarray(origin, dtype=np.float64)
        angles = []
        for center, radius in self._circles():
            distance = math.hypot(center[0] - ox, center[1] - oy)
            if distance <= radius:
                continue
            axis = math.atan2(center[1] - oy, center[0] - ox)
            spread = math.asin(radius / distance)
            angles += [axis - spread, axis + spread]
        return np.array(angles)

    def _circles(self) -> list[tuple[tuple[float, float], float]]:
        return [(b.center, b.radius) for b in self.blobs] + [(self.disc_center, self.disc_radius)]

    def combine(self, other: "Phantom", alpha: float = 1.0, beta: float = 1.0) -> "Phantom":
        """alpha * self + beta * other on the same disc."""
        scaled = [b.model_copy(update={"amplitude": alpha * b.amplitude}) for b in self.blobs]
        scaled += [b.model_copy(update={"amplitude": beta * b.amplitude}) for b in other.blobs]
        return Phantom(blobs=tuple(scaled), disc_center=self.disc_center, disc_radius=self.disc_radius)


def eval_phantom(phantom: Phantom, points: ArrayLike) -> NDArray[np.float64]:
    """Phantom values at points of shape (..., 2); a single point gives a 0-d array."""
    points = np.asarray(points, dtype=np.float64)
    total = np.zeros(points.shape[:-1])
    for blob in phantom.blobs:
        total = total + blob(points)
    inside = np.hypot(
        points[..., 0] - phantom.disc_center[0], points[..., 1] - phantom.disc_center[1]
    ) <= phantom.disc_radius
    return np.where(inside, total, 0.0)


def rasterize(phantom: Phantom, grid: PixelGrid) -> NDArray[np.float64]:
    """Phantom values at pixel centres, in pixel order."""
    return eval_phantom(phantom, grid.centers())
