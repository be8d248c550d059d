"""Deterministic quadrature for inner-product assembly."""

from distfree.quadrature.config import QuadratureConfig
from distfree.quadrature.domains import Box, ConeRegion, Interval, LineSegment, ray_box_interval
from distfree.quadrature.integrate import (
    QuadratureCloud,
    box_cloud,
    cloud_for,
    cone_cloud,
    evaluate_finite,
    integrate_box,
    integrate_cone,
    integrate_interval,
    integrate_line,
    integrate_product,
    interval_cloud,
    product_sum,
    segment_cloud,
)
from distfree.quadrature.rules import MAX_ORDER, QuadratureRule1D, composite_rule, gauss_rule

__all__ = [
    # Rules
    "MAX_ORDER",
    "QuadratureRule1D",
    "gauss_rule",
    "composite_rule",
    "QuadratureConfig",
    # Domains
    "Interval",
    "Box",
    "LineSegment",
    "ConeRegion",
    "ray_box_interval",
    # Integration
    "QuadratureCloud",
    "evaluate_finite",
    "interval_cloud",
    "box_cloud",
    "segment_cloud",
    "cone_cloud",
    "cloud_for",
    "integrate_interval",
    "integrate_box",
    "integrate_line",
    "integrate_cone",
    "integrate_product",
    "product_sum",
]
