"""Regular pixel grid and its pixel-supported bump test functions."""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from distfree.errors import InvalidArgumentError
from distfree.measurement.functions import MeasurementSet, TestFunction, cos2_profile
from distfree.quadrature import Box


class PixelGrid(BaseModel):
    """N x N pixels tiling the imaging window (unit square by default).

    Pixel j = row * N + col, row counting along y and col along x.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    side_count: int = Field(..., ge=1, description="Pixels per side (N)")
    extent: tuple[float, float, float, float] = Field(
        (0.0, 1.0, 0.0, 1.0), description="(x_lo, x_hi, y_lo, y_hi) of the window"
    )

    @model_validator(mode="after")
    def check_extent(self) -> "PixelGrid":
        x_lo, x_hi, y_lo, y_hi = self.extent
        if not (x_lo < x_hi and y_lo < y_hi):
            raise ValueError(f"degenerate grid extent {self.extent}")
        return self

    @property
    def window(self) -> Box:
        return Box(*self.extent)

    @property
    def size(self) -> int:
        return self.side_count * self.side_count

    @property
    def edges(self) -> tuple[float, float]:
        x_lo, x_hi, y_lo, y_hi = self.extent
        return (x_hi - x_lo) / self.side_count, (y_hi - y_lo) / self.side_count

    @property
    def pixels(self) -> list[Box]:
        x_lo, _, y_lo, _ = self.extent
        ex, ey = self.edges
        n = self.side_count
        return [
            Box(x_lo + col * ex, x_lo + (col + 1) * ex, y_lo + row * ey, y_lo + (row + 1) * ey)
            for row in range(n)
            for col in range(n)
        ]

    def centers(self) -> np.ndarray:
        """Pixel centres, shape (N*N, 2), in pixel order."""
        return np.array([p.center for p in self.pixels])


def pixel_bumps(grid: PixelGrid, fill: float = 0.95) -> MeasurementSet:
    """Unit-integral tensor cos^2 bumps, one per pixel.

    Each bump lives on the pixel shrunk by ``fill`` about its centre, so that
    <phi_j, x> is a local average of x.

    Raises:
        InvalidArgumentError: If fill is outside (0, 1]
    """
    if not 0.0 < fill <= 1.0:
        raise InvalidArgumentError(f"pixel fill must lie in (0, 1], got {fill}")
    ex, ey = grid.edges
    hx, hy = 0.5 * fill * ex, 0.5 * fill * ey
    members = []
    for index, pixel in enumerate(grid.pixels):
        cx, cy = pixel.center
        members.append(_pixel_bump(cx, cy, hx, hy, label=f"pixel[{index}]"))
    return MeasurementSet.of(members)


def _pixel_bump(cx: float, cy: float, hx: float, hy: float, label: str) -> TestFunction:
    def fx(x: np.ndarray) -> np.ndarray:
        return cos2_profile(x, cx, hx) / hx

    def fy(y: np.ndarray) -> np.ndarray:
        return cos2_profile(y, cy, hy) / hy

    def evaluator(points: np.ndarray) -> np.ndarray:
        return fx(points[..., 0]) * fy(points[..., 1])

    return TestFunction(
        evaluator=evaluator,
        support=Box(cx - hx, cx + hx, cy - hy, cy + hy),
        label=label,
        shape_key=f"pixel-bump:{hx!r}:{hy!r}",
        anchor=(cx, cy),
        factors=(fx, fy),
    )
