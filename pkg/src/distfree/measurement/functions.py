"""Test functions, measurement sets and the screen device profile."""

import math
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from distfree.errors import InvalidArgumentError
from distfree.quadrature import (
    Box,
    Interval,
    QuadratureCloud,
    QuadratureConfig,
    QuadratureRule1D,
    box_cloud,
    gauss_rule,
    interval_cloud,
)

Evaluator = Callable[[NDArray[np.float64]], NDArray[np.float64]]


class AssemblyMode(str, Enum):
    """How test functions are resolved into quadrature nodes.

    cone:       pushed functions integrated over their full cone
    line:       pushed functions collapsed onto their central line
    point-line: as line, and 2-D test functions collapsed to their anchor point
    """

    CONE = "cone"
    LINE = "line"
    POINT_LINE = "point-line"


@dataclass(frozen=True, eq=False, kw_only=True)
class TestFunction:
    """Compactly supported smooth function on an interval or a box.

    ``evaluator`` is called on arrays of abscissae (q,) or points (q, 2);
    values outside ``support`` are forced to zero.

    Optional structure lets assembly take shortcuts:
    - ``shape_key``/``anchor``: members with equal keys are translates of each
      other, anchored at ``anchor``
    - ``factors``: f(x, y) = factors[0](x) * factors[1](y)
    - ``rule``: a quadrature rule replacing the configured default
    """

    __test__ = False  # not a pytest class

    evaluator: Evaluator
    support: Interval | Box
    label: str = ""
    shape_key: str | None = None
    anchor: tuple[float, ...] | None = None
    factors: tuple[Evaluator, Evaluator] | None = None
    rule: QuadratureRule1D | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return 1 if isinstance(self.support, Interval) else 2

    def __call__(self, points: ArrayLike) -> NDArray[np.float64]:
        points = np.asarray(points, dtype=np.float64)
        inside = self.support.contains(points)
        if not np.any(inside):
            return np.zeros(inside.shape)
        return np.where(inside, self.evaluator(points), 0.0)

    def rule_for(self, quad: QuadratureConfig) -> QuadratureRule1D:
        if self.rule is not None:
            return self.rule
        return gauss_rule(quad.detector_order if self.dim == 1 else quad.pixel_order)

    def cloud(
        self, quad: QuadratureConfig, mode: AssemblyMode = AssemblyMode.CONE
    ) -> QuadratureCloud:
        """Quadrature nodes on the support with weights multiplied by the function."""
        rule = self.rule_for(quad)
        if self.dim == 1:
            base = interval_cloud(self.support.lo, self.support.hi, rule)
            return base.weighted(self(base.points))
        base = box_cloud(self.support, rule, rule)
        full = base.weighted(self(base.points))
        if mode is AssemblyMode.POINT_LINE:
            anchor = self.anchor if self.anchor is not None else self.support.center
            return QuadratureCloud(
                points=np.asarray([anchor], dtype=np.float64),
                weights=np.array([full.weights.sum()]),
            )
        return full

    def axis_clouds(self, quad: QuadratureConfig) -> tuple[QuadratureCloud, QuadratureCloud] | None:
        """Weighted one-dimensional clouds of the two factors, if separable."""
        if self.factors is None or self.dim != 2:
            return None
        rule = self.rule_for(quad)
        fx, fy = self.factors
        cx = interval_cloud(self.support.x_lo, self.support.x_hi, rule)
        cy = interval_cloud(self.support.y_lo, self.support.y_hi, rule)
        return cx.weighted(fx(cx.points)), cy.weighted(fy(cy.points))

    def mass(self, quad: QuadratureConfig) -> float:
        """Integral of the function over its support."""
        return float(self.cloud(quad).weights.sum())


@dataclass(frozen=True, eq=False)
class MeasurementSet:
    """Ordered, nonempty collection of test functions on a common domain."""

    members: tuple[TestFunction, ...]
    domain_dim: int

    def __post_init__(self) -> None:
        if not self.members:
            raise InvalidArgumentError("a measurement set needs at least one test function")
        dims = {m.dim for m in self.members}
        if dims != {self.domain_dim}:
            raise InvalidArgumentError(
                f"measurement set of dimension {self.domain_dim} has members of dimension {sorted(dims)}"
            )

    @classmethod
    def of(cls, members: Sequence[TestFunction]) -> "MeasurementSet":
        members = tuple(members)
        if not members:
            raise InvalidArgumentError("a measurement set needs at least one test function")
        return cls(members=members, domain_dim=members[0].dim)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[TestFunction]:
        return iter(self.members)

    def __getitem__(self, index: int) -> TestFunction:
        return self.members[index]

    def reordered(self, order: Sequence[int]) -> "MeasurementSet":
        return MeasurementSet(members=tuple(self.members[i] for i in order), domain_dim=self.domain_dim)

    def clouds(
        self, quad: QuadratureConfig, mode: AssemblyMode = AssemblyMode.CONE
    ) -> list[QuadratureCloud]:
        return [m.cloud(quad, mode) for m in self.members]


def cos2_profile(t: NDArray[np.float64], center: float, half_width: float) -> NDArray[np.float64]:
    """cos^2(pi (t - center) / (2 half_width)) inside the window, 0 outside."""
    u = (t - center) / half_width
    return np.where(np.abs(u) < 1.0, np.cos(0.5 * math.pi * u) ** 2, 0.0)


def bump_1d(center: float, half_width: float, peak: float = 1.0) -> TestFunction:
    """Smooth one-dimensional bump of the given peak value.

    The integral is ``peak * half_width``.

    Raises:
        InvalidArgumentError: If half_width <= 0
    """
    if not half_width > 0:
        raise InvalidArgumentError(f"bump half-width must be positive, got {half_width}")
    return TestFunction(
        evaluator=lambda t: peak * cos2_profile(t, center, half_width),
        support=Interval(center - half_width, center + half_width),
        label=f"bump({center:.6g}, {half_width:.6g})",
        shape_key=f"bump1d:{half_width!r}:{peak!r}",
        anchor=(center,),
    )
