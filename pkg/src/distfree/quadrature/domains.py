"""Integration domains: intervals, boxes, line segments and clipped cones."""

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from distfree.errors import InvalidArgumentError

Point = tuple[float, float]


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] on the real line."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise InvalidArgumentError(f"interval needs lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, t: ArrayLike) -> NDArray[np.bool_]:
        t = np.asarray(t, dtype=np.float64)
        return (t >= self.lo) & (t <= self.hi)

    def intersection(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return Interval(lo, hi) if lo < hi else None


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi]."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self) -> None:
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise InvalidArgumentError(
                f"box needs lo < hi on both axes, got "
                f"[{self.x_lo}, {self.x_hi}] x [{self.y_lo}, {self.y_hi}]"
            )

    @classmethod
    def around(cls, center: Point, half_width: float) -> "Box":
        """Square box of the given half-width about a center."""
        cx, cy = center
        return cls(cx - half_width, cx + half_width, cy - half_width, cy + half_width)

    @property
    def center(self) -> Point:
        return (0.5 * (self.x_lo + self.x_hi), 0.5 * (self.y_lo + self.y_hi))

    @property
    def area(self) -> float:
        return (self.x_hi - self.x_lo) * (self.y_hi - self.y_lo)

    @property
    def diameter(self) -> float:
        return math.hypot(self.x_hi - self.x_lo, self.y_hi - self.y_lo)

    def contains(self, points: ArrayLike) -> NDArray[np.bool_]:
        """Mask of points (shape (..., 2)) lying in the closed box."""
        p = np.asarray(points, dtype=np.float64)
        x, y = p[..., 0], p[..., 1]
        return (x >= self.x_lo) & (x <= self.x_hi) & (y >= self.y_lo) & (y <= self.y_hi)

    def contains_box(self, other: "Box") -> bool:
        return (
            self.x_lo <= other.x_lo
            and other.x_hi <= self.x_hi
            and self.y_lo <= other.y_lo
            and other.y_hi <= self.y_hi
        )

    def intersection(self, other: "Box") -> "Box | None":
        x_lo, x_hi = max(self.x_lo, other.x_lo), min(self.x_hi, other.x_hi)
        y_lo, y_hi = max(self.y_lo, other.y_lo), min(self.y_hi, other.y_hi)
        if x_lo < x_hi and y_lo < y_hi:
            return Box(x_lo, x_hi, y_lo, y_hi)
        return None

    def expanded(self, margin: float) -> "Box":
        """The box grown by margin on every side."""
        return Box(self.x_lo - margin, self.x_hi + margin, self.y_lo - margin, self.y_hi + margin)

    def distance_to(self, other: "Box") -> float:
        """Euclidean gap between two boxes (0 when they touch or overlap)."""
        dx = max(0.0, other.x_lo - self.x_hi, self.x_lo - other.x_hi)
        dy = max(0.0, other.y_lo - self.y_hi, self.y_lo - other.y_hi)
        return math.hypot(dx, dy)

    def corners(self) -> NDArray[np.float64]:
        return np.array(
            [
                [self.x_lo, self.y_lo],
                [self.x_hi, self.y_lo],
                [self.x_hi, self.y_hi],
                [self.x_lo, self.y_hi],
            ]
        )


@dataclass(frozen=True)
class LineSegment:
    """Straight segment from ``start`` to ``end`` in the plane."""

    start: Point
    end: Point

    def __post_init__(self) -> None:
        if tuple(self.start) == tuple(self.end):
            raise InvalidArgumentError(f"segment endpoints coincide at {self.start}")

    @property
    def length(self) -> float:
        return math.hypot(self.end[0] - self.start[0], self.end[1] - self.start[1])

    def point_at(self, s: ArrayLike) -> NDArray[np.float64]:
        """Points at arclength ``s`` from the start."""
        s = np.asarray(s, dtype=np.float64)
        a = np.asarray(self.start, dtype=np.float64)
        direction = (np.asarray(self.end, dtype=np.float64) - a) / self.length
        return a + s[..., None] * direction


@dataclass(frozen=True)
class ConeRegion:
    """Angular sector {apex + t(cos a, sin a): 0 < t < radius, angle_lo < a < angle_hi}.

    Angles are absolute (measured from the x-axis). When ``clip_box`` is set,
    only the part of the sector inside the box is integrated.
    """

    apex: Point
    angle_lo: float
    angle_hi: float
    radius: float
    clip_box: Box | None = None

    def __post_init__(self) -> None:
        if not self.angle_lo < self.angle_hi:
            raise InvalidArgumentError(
                f"cone needs angle_lo < angle_hi, got ({self.angle_lo}, {self.angle_hi})"
            )
        if not self.radius > 0:
            raise InvalidArgumentError(f"cone radius must be positive, got {self.radius}")

    @property
    def opening(self) -> float:
        return self.angle_hi - self.angle_lo

    def bounding_box(self) -> Box:
        """Box enclosing the (clipped) sector."""
        angles = [self.angle_lo, self.angle_hi]
        # Extreme points of the arc at the axis directions inside the sector
        k_lo = math.ceil(self.angle_lo / (0.5 * math.pi))
        k_hi = math.floor(self.angle_hi / (0.5 * math.pi))
        angles.extend(0.5 * math.pi * k for k in range(k_lo, k_hi + 1))
        ax, ay = self.apex
        xs = [ax] + [ax + self.radius * math.cos(a) for a in angles]
        ys = [ay] + [ay + self.radius * math.sin(a) for a in angles]
        box = Box(min(xs), max(xs), min(ys), max(ys))
        if self.clip_box is not None:
            return box.intersection(self.clip_box) or self.clip_box
        return box


def ray_box_interval(
    origin: ArrayLike, directions: ArrayLike, box: Box
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Parameter interval [t_lo, t_hi] of each ray origin + t * direction inside a box.

    Rays missing the box get t_lo > t_hi.

    Args:
        origin: Ray origin, shape (2,)
        directions: Ray directions, shape (q, 2)
        box: Clipping box

    Returns:
        Tuple of (t_lo, t_hi) arrays of shape (q,)
    """
    o = np.asarray(origin, dtype=np.float64)
    d = np.atleast_2d(np.asarray(directions, dtype=np.float64))
    t_lo = np.full(d.shape[0], -np.inf)
    t_hi = np.full(d.shape[0], np.inf)
    for axis, (lo, hi) in enumerate(((box.x_lo, box.x_hi), (box.y_lo, box.y_hi))):
        component = d[:, axis]
        parallel = component == 0.0
        safe = np.where(parallel, 1.0, component)
        ta = (lo - o[axis]) / safe
        tb = (hi - o[axis]) / safe
        near = np.minimum(ta, tb)
        far = np.maximum(ta, tb)
        inside = lo <= o[axis] <= hi
        near = np.where(parallel, -np.inf if inside else np.inf, near)
        far = np.where(parallel, np.inf if inside else -np.inf, far)
        t_lo = np.maximum(t_lo, near)
        t_hi = np.minimum(t_hi, far)
    return t_lo, t_hi
