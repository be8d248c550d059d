"""Device-weighted ray transform of a classical function."""

import logging
import math
from typing import Protocol, runtime_checkable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from distfree.geometry.fanbeam import FanBeamGeometry, PushedTestFunction, detector_set, wrap_angle
from distfree.measurement import Evaluator, MeasurementSet
from distfree.quadrature import (
    Interval,
    QuadratureConfig,
    QuadratureRule1D,
    evaluate_finite,
    gauss_rule,
)

logger = logging.getLogger(__name__)


@runtime_checkable
class RayBreakpoints(Protocol):
    """A function that is smooth along any ray between known arclengths."""

    def __call__(self, points: NDArray[np.float64]) -> NDArray[np.float64]: ...

    def ray_breakpoints(self, origin: ArrayLike, directions: ArrayLike) -> NDArray[np.float64]:
        """Arclengths of shape (q, p) for q unit directions; NaN marks an unused slot."""
        ...

    def tangent_angles(self, origin: ArrayLike) -> NDArray[np.float64]:
        """Absolute directions of the rays from origin along which the breakpoints merge."""
        ...


def ray_knots(
    f: Evaluator,
    origin: NDArray[np.float64],
    directions: NDArray[np.float64],
    t_lo: NDArray[np.float64],
    t_hi: NDArray[np.float64],
) -> NDArray[np.float64]:
    """Sorted panel ends along each ray: t_lo, the breakpoints of f inside, t_hi."""
    lo, hi = t_lo[:, None], t_hi[:, None]
    if not isinstance(f, RayBreakpoints):
        return np.hstack([lo, hi])
    breaks = np.asarray(f.ray_breakpoints(origin, directions), dtype=np.float64)
    inner = np.clip(np.where(np.isnan(breaks), lo, breaks), lo, hi)
    return np.sort(np.hstack([lo, inner, hi]), axis=1)


def screen_nodes(
    f: Evaluator,
    geometry: FanBeamGeometry,
    rotation_index: int,
    support: Interval,
    rule: QuadratureRule1D,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Angular nodes and weights on a device support, split where rays graze a rim of f."""
    knots = [support.lo, support.hi]
    if isinstance(f, RayBreakpoints):
        origin = geometry.source_position(rotation_index)
        absolute = np.asarray(f.tangent_angles(origin), dtype=np.float64)
        grazing = wrap_angle(absolute - geometry.axis_angle(rotation_index))
        knots += [float(a) for a in grazing if support.lo < a < support.hi]
    knots = np.unique(knots)
    pieces = [rule.mapped(a, b) for a, b in zip(knots[:-1], knots[1:], strict=True)]
    return np.concatenate([p[0] for p in pieces]), np.concatenate([p[1] for p in pieces])


def line_integral_data(
    geometry: FanBeamGeometry,
    f: Evaluator,
    quad: QuadratureConfig | None = None,
    detectors: MeasurementSet | None = None,
) -> NDArray[np.float64]:
    """Noiseless data b_k = integral of B(theta) psi_k(theta) over the screen.

    B(theta) is the integral of f along the ray at screen angle theta, cut to
    the window and to the screen radius. The angular integral (outer) uses
    quad.data_angular nodes on supp(psi_k); the ray integral (inner) uses
    quad.data_radial nodes. When f reports its breakpoints (see RayBreakpoints)
    both rules are applied per piece: along each ray between consecutive
    breakpoints and over the screen between grazing angles. Otherwise each
    ray is a single panel.

    Args:
        geometry: Acquisition geometry
        f: Vectorized function on points of shape (q, 2)
        quad: Quadrature node counts (defaults when None)
        detectors: Device functions (detector_set(geometry) when None)

    Returns:
        Vector of length rotation_count * len(detectors), rotation-major

    Raises:
        QuadratureError: If f is not finite at a node
    """
    quad = quad or QuadratureConfig()
    detectors = detectors or detector_set(geometry)
    rule_theta = gauss_rule(quad.data_angular)
    rule_t = gauss_rule(quad.data_radial)
    data = np.zeros(geometry.rotation_count * len(detectors))

    for k in range(geometry.rotation_count):
        x0 = geometry.source_position(k)
        for j, psi in enumerate(detectors):
            theta, w_theta = screen_nodes(f, geometry, k, psi.support, rule_theta)
            t_lo, t_hi = geometry.ray_extent(k, theta)
            hit = t_hi > t_lo
            if not hit.any():
                continue
            theta, w_theta, t_lo, t_hi = theta[hit], w_theta[hit], t_lo[hit], t_hi[hit]
            directions = geometry.ray_directions(k, theta)
            knots = ray_knots(f, x0, directions, t_lo, t_hi)
            half = 0.5 * np.diff(knots, axis=1)
            # (angles, panels, radial nodes)
            t = (0.5 * (knots[:, 1:] + knots[:, :-1]))[..., None] + half[..., None] * rule_t.nodes
            points = x0 + t[..., None] * directions[:, None, None, :]
            values = evaluate_finite(f, points.reshape(-1, 2)).reshape(t.shape)
            ray_sums = ((values * rule_t.weights).sum(axis=2) * half).sum(axis=1)
            data[k * len(detectors) + j] = float(np.dot(w_theta * psi(theta), ray_sums))

    logger.debug(f"Line-integral data for {data.size} measurements, peak {np.abs(data).max():.4g}")
    return data


def _edge_crossings(
    apex: NDArray[np.float64],
    edges: NDArray[np.float64],
    center: NDArray[np.float64],
    radii: NDArray[np.float64],
) -> NDArray[np.float64]:
    """Polar angles in [0, 2 pi) where the cone edges cross circles about center; NaN on a miss."""
    offset = apex - center
    columns = []
    for u in edges:
        b = float(u @ offset)
        disc = b * b - (float(offset @ offset) - radii**2)
        root = np.sqrt(np.where(disc > 0.0, disc, np.nan))
        for s in (-b - root, -b + root):
            angle = np.mod(np.arctan2(offset[1] + s * u[1], offset[0] + s * u[0]), 2.0 * math.pi)
            columns.append(np.where(s > 0.0, angle, np.nan))
    return np.column_stack(columns)


def disc_pairing(
    pushed: PushedTestFunction,
    f: Evaluator,
    center: tuple[float, float],
    radius: float,
    order: int = 32,
) -> float:
    """Integral of (A psi) * f over a disc, in polar coordinates about its centre.

    Nothing here follows the rays from the source. Each circle about the
    centre is split where the cone edges cross it, and the radial integral is
    split where the circles become tangent to an edge line. For f analytic on
    the closed disc the result is accurate to near rounding and serves as an
    independent check on line_integral_data.

    Args:
        pushed: Pushed device function A psi
        f: Vectorized function, taken as zero outside the disc
        center: Disc centre
        radius: Disc radius
        order: Gauss nodes per radial and per angular panel

    Returns:
        The pairing <A psi, f restricted to the disc>
    """
    c = np.asarray(center, dtype=np.float64)
    apex = np.asarray(pushed.cone.apex, dtype=np.float64)
    angles = (pushed.cone.angle_lo, pushed.cone.angle_hi)
    edges = np.array([[math.cos(a), math.sin(a)] for a in angles])
    offset = apex - c
    rule = gauss_rule(order)

    tangency = [abs(u[0] * offset[1] - u[1] * offset[0]) for u in edges]
    r_knots = np.unique([0.0, radius, *(p for p in tangency if p < radius)])
    shells = [rule.mapped(a, b) for a, b in zip(r_knots[:-1], r_knots[1:], strict=True)]
    r = np.concatenate([s[0] for s in shells])
    w_r = np.concatenate([s[1] for s in shells])

    crossings = _edge_crossings(apex, edges, c, r)
    full = np.full_like(r, 2.0 * math.pi)
    knots = np.sort(
        np.column_stack([np.zeros_like(r), np.where(np.isnan(crossings), 0.0, crossings), full]),
        axis=1,
    )
    half = 0.5 * np.diff(knots, axis=1)
    # (shells, arcs, angular nodes)
    phi = (0.5 * (knots[:, 1:] + knots[:, :-1]))[..., None] + half[..., None] * rule.nodes
    points = c + r[:, None, None, None] * np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    flat = points.reshape(-1, 2)
    values = (pushed.evaluator(flat) * evaluate_finite(f, flat)).reshape(phi.shape)
    rings = ((values * rule.weights).sum(axis=2) * half).sum(axis=1)
    return float(w_r @ (rings * r))
