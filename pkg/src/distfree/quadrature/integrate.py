"""Node clouds and deterministic integration over intervals, boxes, lines and cones.

Integrands are numpy-vectorized callables: a 1-D integrand receives an array
of abscissae of shape (q,), a 2-D integrand an array of points of shape (q, 2).
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from distfree.errors import InvalidArgumentError, QuadratureError
from distfree.quadrature.domains import Box, ConeRegion, Interval, LineSegment, ray_box_interval
from distfree.quadrature.rules import QuadratureRule1D


Integrand = Callable[[NDArray[np.float64]], NDArray[np.float64]]
Domain = Interval | Box | LineSegment | ConeRegion
DomainRules = QuadratureRule1D | tuple[QuadratureRule1D, QuadratureRule1D]

# Upper bound on integrand evaluations materialized at once by integrate_product
_PRODUCT_CHUNK = 2**22


@dataclass(frozen=True, eq=False)
class QuadratureCloud:
    """Quadrature nodes with their (positive or signed) weights.

    ``points`` has shape (q,) for 1-D domains and (q, 2) for planar ones.
    """

    points: NDArray[np.float64]
    weights: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.points.shape[0] != self.weights.shape[0]:
            raise InvalidArgumentError(
                f"cloud has {self.points.shape[0]} points but {self.weights.shape[0]} weights"
            )

    @property
    def size(self) -> int:
        return int(self.weights.shape[0])

    @property
    def dim(self) -> int:
        return 1 if self.points.ndim == 1 else int(self.points.shape[1])

    @classmethod
    def empty(cls, dim: int) -> "QuadratureCloud":
        shape = (0,) if dim == 1 else (0, dim)
        return cls(points=np.zeros(shape), weights=np.zeros(0))

    def weighted(self, values: NDArray[np.float64]) -> "QuadratureCloud":
        """Cloud with weights multiplied by ``values`` (one per node)."""
        return QuadratureCloud(points=self.points, weights=self.weights * values)

    def integrate(self, f: Integrand) -> float:
        """Sum of weight * f(node) over the cloud."""
        if self.size == 0:
            return 0.0
        return float(np.dot(self.weights, evaluate_finite(f, self.points)))


def evaluate_finite(f: Integrand, points: NDArray[np.float64]) -> NDArray[np.float64]:
    """Evaluate an integrand at nodes, rejecting non-finite values.

    Raises:
        QuadratureError: If any value is NaN or infinite; carries the node
    """
    values = np.asarray(f(points), dtype=np.float64)
    if values.shape != (points.shape[0],):
        values = np.broadcast_to(values, (points.shape[0],))
    finite = np.isfinite(values)
    if not finite.all():
        bad = int(np.flatnonzero(~finite)[0])
        location = points[bad]
        raise QuadratureError(
            f"integrand is not finite ({values[bad]}) at node {location}", location=location
        )
    return values


def interval_cloud(a: float, b: float, rule: QuadratureRule1D) -> QuadratureCloud:
    """Nodes of ``rule`` affinely mapped onto [a, b]."""
    if not a < b:
        raise InvalidArgumentError(f"interval needs a < b, got [{a}, {b}]")
    x, w = rule.mapped(a, b)
    return QuadratureCloud(points=x, weights=w)


def box_cloud(box: Box, rule_x: QuadratureRule1D, rule_y: QuadratureRule1D) -> QuadratureCloud:
    """Tensor-product nodes on a box, x varying slowest."""
    x, wx = rule_x.mapped(box.x_lo, box.x_hi)
    y, wy = rule_y.mapped(box.y_lo, box.y_hi)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    points = np.column_stack([xx.ravel(), yy.ravel()])
    return QuadratureCloud(points=points, weights=np.outer(wx, wy).ravel())


def segment_cloud(segment: LineSegment, rule: QuadratureRule1D) -> QuadratureCloud:
    """Nodes along a segment, weighted by arclength."""
    s, w = rule.mapped(0.0, segment.length)
    return QuadratureCloud(points=segment.point_at(s), weights=w)


def cone_cloud(
    cone: ConeRegion, rule_r: QuadratureRule1D, rule_theta: QuadratureRule1D
) -> QuadratureCloud:
    """Polar nodes about the cone apex, including the Jacobian factor t.

    With a clip box the radial range of every angular node is cut to the part
    of its ray inside the box, so points outside contribute nothing.
    """
    theta, w_theta = rule_theta.mapped(cone.angle_lo, cone.angle_hi)
    directions = np.column_stack([np.cos(theta), np.sin(theta)])
    t_lo = np.zeros_like(theta)
    t_hi = np.full_like(theta, cone.radius)
    if cone.clip_box is not None:
        enter, leave = ray_box_interval(cone.apex, directions, cone.clip_box)
        t_lo = np.maximum(t_lo, enter)
        t_hi = np.minimum(t_hi, leave)
    keep = t_hi > t_lo
    if not keep.any():
        return QuadratureCloud.empty(2)

    theta, w_theta, directions = theta[keep], w_theta[keep], directions[keep]
    t_lo, t_hi = t_lo[keep], t_hi[keep]
    half = 0.5 * (t_hi - t_lo)
    # (angles, radial nodes)
    t = (0.5 * (t_lo + t_hi))[:, None] + half[:, None] * rule_r.nodes[None, :]
    w = w_theta[:, None] * half[:, None] * rule_r.weights[None, :] * t
    apex = np.asarray(cone.apex, dtype=np.float64)
    points = apex + t[..., None] * directions[:, None, :]
    return QuadratureCloud(points=points.reshape(-1, 2), weights=w.ravel())


def cloud_for(domain: Domain, rules: DomainRules) -> QuadratureCloud:
    """Build the node cloud of any supported domain.

    Intervals and segments take a single rule; boxes take (rule_x, rule_y) and
    cones take (rule_r, rule_theta).
    """
    match domain:
        case Interval():
            return interval_cloud(domain.lo, domain.hi, _single(rules))
        case LineSegment():
            return segment_cloud(domain, _single(rules))
        case Box():
            rule_x, rule_y = _pair(rules)
            return box_cloud(domain, rule_x, rule_y)
        case ConeRegion():
            rule_r, rule_theta = _pair(rules)
            return cone_cloud(domain, rule_r, rule_theta)
    raise InvalidArgumentError(f"unsupported integration domain {type(domain).__name__}")


def _single(rules: DomainRules) -> QuadratureRule1D:
    if isinstance(rules, QuadratureRule1D):
        return rules
    raise InvalidArgumentError("a one-dimensional domain takes a single rule")


def _pair(rules: DomainRules) -> tuple[QuadratureRule1D, QuadratureRule1D]:
    if isinstance(rules, QuadratureRule1D):
        return rules, rules
    first, second = rules
    return first, second


def integrate_interval(f: Integrand, a: float, b: float, rule: QuadratureRule1D) -> float:
    """Integrate f over [a, b] with the affinely mapped rule.

    Raises:
        InvalidArgumentError: If a >= b
        QuadratureError: If f is not finite at a node
    """
    return interval_cloud(a, b, rule).integrate(f)


def integrate_box(f: Integrand, box: Box, rule_x: QuadratureRule1D, rule_y: QuadratureRule1D) -> float:
    """Integrate f over a box with a tensor-product rule."""
    return box_cloud(box, rule_x, rule_y).integrate(f)


def integrate_line(f: Integrand, segment: LineSegment, rule: QuadratureRule1D) -> float:
    """Integrate f with respect to arclength along a segment."""
    return segment_cloud(segment, rule).integrate(f)


def integrate_cone(
    f: Integrand, cone: ConeRegion, rule_r: QuadratureRule1D, rule_theta: QuadratureRule1D
) -> float:
    """Integrate f over a cone (clipped to its box) in polar coordinates about the apex.

    An empty intersection with the clip box integrates to 0.
    """
    return cone_cloud(cone, rule_r, rule_theta).integrate(f)


def integrate_product(
    f: Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.float64]],
    d1: Domain,
    d2: Domain,
    rules: Sequence[DomainRules],
) -> float:
    """Iterated quadrature of f(x, y) over d1 x d2.

    ``f`` is called with broadcastable node arrays: x of shape (q1, 1[, 2]) and
    y of shape (1, q2[, 2]), and must return shape (q1, q2).

    Args:
        f: Vectorized integrand on the product domain
        d1: First domain
        d2: Second domain
        rules: Rules for d1 and d2 (see cloud_for)

    Returns:
        The approximate double integral
    """
    rules1, rules2 = rules
    c1 = cloud_for(d1, rules1)
    c2 = cloud_for(d2, rules2)
    return product_sum(f, c1, c2)


def product_sum(
    f: Callable[[NDArray[np.float64], NDArray[np.float64]], NDArray[np.float64]],
    c1: QuadratureCloud,
    c2: QuadratureCloud,
) -> float:
    """Sum of w1_i * w2_j * f(x_i, y_j) over two clouds, chunked over x."""
    if c1.size == 0 or c2.size == 0:
        return 0.0
    y = c2.points[None, ...]
    rows = max(1, _PRODUCT_CHUNK // c2.size)
    total = 0.0
    for start in range(0, c1.size, rows):
        x = c1.points[start : start + rows, None, ...]
        values = np.asarray(f(x, y), dtype=np.float64)
        if not np.isfinite(values).all():
            i, j = np.argwhere(~np.isfinite(values))[0]
            location = (c1.points[start + i], c2.points[j])
            raise QuadratureError(f"integrand is not finite at node pair {location}", location=location)
        total += float(c1.weights[start : start + rows] @ values @ c2.weights)
    return total
