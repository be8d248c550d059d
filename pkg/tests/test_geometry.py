"""Tests for distfree fan-beam geometry, pushforward and ray data."""

import math
from dataclasses import dataclass

import numpy as np
import pytest
from scipy import integrate as sp_integrate

from distfree.errors import InvalidArgumentError
from distfree.geometry import (
    FanBeamGeometry,
    PushedTestFunction,
    RayBreakpoints,
    acquisition_set,
    detector_set,
    disc_pairing,
    line_integral_data,
    push_forward,
    ray_knots,
    uniform_rotations,
    wrap_angle,
)
from distfree.measurement import AssemblyMode, MeasurementSet, bump_1d
from distfree.phantom import Blob, Phantom
from distfree.quadrature import QuadratureConfig


def _make_matched_quad() -> QuadratureConfig:
    """Cone rules equal to the data rules, so both paths share their nodes."""
    base = QuadratureConfig()
    return base.model_copy(update={"cone_radial": base.data_radial, "cone_angular": base.data_angular})


def _smooth(points: np.ndarray) -> np.ndarray:
    return np.exp(points[:, 0]) * np.cos(2.0 * points[:, 1])


@dataclass(frozen=True)
class _UnitDisc:
    """Indicator of a disc, reporting its rim crossings along rays."""

    center: tuple[float, float]
    radius: float

    def __call__(self, points: np.ndarray) -> np.ndarray:
        d = np.hypot(points[:, 0] - self.center[0], points[:, 1] - self.center[1])
        return (d < self.radius).astype(np.float64)

    def ray_breakpoints(self, origin, directions) -> np.ndarray:
        return self._as_phantom().ray_breakpoints(origin, directions)

    def tangent_angles(self, origin) -> np.ndarray:
        return self._as_phantom().tangent_angles(origin)

    def _as_phantom(self) -> Phantom:
        return Phantom(disc_center=self.center, disc_radius=self.radius)


def _relative_gap(pushed: PushedTestFunction, quad: QuadratureConfig) -> float:
    cone = pushed.cloud(quad, AssemblyMode.CONE).integrate(_smooth)
    line = pushed.cloud(quad, AssemblyMode.LINE).integrate(_smooth)
    return abs(cone - line) / abs(cone)


# ============================================================================
# Geometry
# ============================================================================


class TestFanBeamGeometry:
    """Tests for FanBeamGeometry construction and ray bookkeeping."""

    def test_default_geometry_is_valid(self):
        geometry = FanBeamGeometry()
        assert geometry.rotation_count == 12
        assert geometry.measurement_count == 12 * 32

    def test_source_positions(self):
        geometry = FanBeamGeometry(rotation_angles=(0.0, math.pi / 2))
        np.testing.assert_allclose(geometry.source_position(0), [-0.7, 0.5], atol=1e-15)
        np.testing.assert_allclose(geometry.source_position(1), [0.5, -0.7], atol=1e-15)

    def test_central_ray_hits_window_center(self):
        geometry = FanBeamGeometry.with_uniform_rotations(5)
        for k in range(geometry.rotation_count):
            assert abs(float(geometry.screen_angle(k, [0.5, 0.5]))) < 1e-14

    def test_screen_angle_sign(self):
        geometry = FanBeamGeometry(rotation_angles=(0.0,))
        # Above the axis is a positive angle for a source on the left
        assert float(geometry.screen_angle(0, [0.5, 0.7])) > 0

    def test_detector_intervals_partition_screen(self):
        geometry = FanBeamGeometry(detector_count=7)
        intervals = geometry.detector_intervals
        assert len(intervals) == 7
        assert intervals[0].lo == pytest.approx(-geometry.half_opening)
        assert intervals[-1].hi == pytest.approx(geometry.half_opening)
        for left, right in zip(intervals[:-1], intervals[1:], strict=True):
            assert left.hi == right.lo

    def test_rejects_source_inside_window(self):
        with pytest.raises(ValueError):
            FanBeamGeometry(source_distance=0.3)

    def test_rejects_fan_not_covering_object(self):
        with pytest.raises(ValueError, match="does not cover"):
            FanBeamGeometry(half_opening=0.2)

    def test_rejects_short_screen(self):
        with pytest.raises(ValueError, match="screen radius"):
            FanBeamGeometry(screen_radius=1.0)

    def test_rejects_empty_rotations(self):
        with pytest.raises(ValueError):
            FanBeamGeometry(rotation_angles=())

    def test_uniform_rotations(self):
        angles = uniform_rotations(4)
        assert angles == pytest.approx((0.0, math.pi / 2, math.pi, 3 * math.pi / 2))
        with pytest.raises(InvalidArgumentError):
            uniform_rotations(0)

    def test_wrap_angle(self):
        np.testing.assert_allclose(wrap_angle(np.array([3 * math.pi / 2, -3 * math.pi / 2])), [-math.pi / 2, math.pi / 2])

    def test_summary(self):
        summary = FanBeamGeometry().summary()
        assert summary["measurement_count"] == 384
        assert summary["detector_width"] == pytest.approx(0.9 / 32)
        # Closest approach is at the 30 degree rotations
        expected = math.hypot(1.2 * math.cos(math.pi / 6) - 0.5, 1.2 * math.sin(math.pi / 6) - 0.5)
        assert summary["source_clearance"] == pytest.approx(expected)
        assert len(summary["rotation_angles"]) == 12


# ============================================================================
# Pushforward
# ============================================================================


class TestPushForward:
    """Tests for push_forward and the acquisition set."""

    def test_detector_set_matches_intervals(self, small_geometry):
        screen = detector_set(small_geometry)
        assert len(screen) == 8
        for psi, interval in zip(screen, small_geometry.detector_intervals, strict=True):
            assert psi.support.center == pytest.approx(interval.center)
            assert psi.support.length == pytest.approx(0.95 * interval.length)

    def test_rejects_support_outside_screen(self, small_geometry):
        with pytest.raises(InvalidArgumentError, match="leaves the screen"):
            push_forward(small_geometry, bump_1d(0.44, 0.05), 0)

    def test_rejects_bad_rotation_index(self, small_geometry, screen):
        with pytest.raises(InvalidArgumentError, match="rotation index"):
            push_forward(small_geometry, screen[0], small_geometry.rotation_count)

    def test_value_is_psi_over_distance(self, small_geometry, screen):
        psi = screen[4]
        pushed = push_forward(small_geometry, psi, 0)
        x0 = small_geometry.source_position(0)
        direction = small_geometry.ray_directions(0, psi.support.center)
        point = x0 + 1.1 * direction
        expected = float(psi(np.array([psi.support.center]))[0]) / 1.1
        assert float(pushed(point[None, :])[0]) == pytest.approx(expected, rel=1e-12)

    def test_zero_outside_cone(self, small_geometry, screen):
        pushed = push_forward(small_geometry, screen[0], 0)
        # The last detector's ray lies on the far side of the fan
        direction = small_geometry.ray_directions(0, small_geometry.detector_intervals[-1].center)
        point = small_geometry.source_position(0) + 1.0 * direction
        assert float(pushed(point[None, :])[0]) == 0.0

    def test_central_line_inside_window(self, small_geometry, screen):
        pushed = push_forward(small_geometry, screen[3], 2)
        assert isinstance(pushed, PushedTestFunction)
        line = pushed.central_line
        assert line is not None
        ends = np.array([line.start, line.end])
        assert np.all(ends >= -1e-12)
        assert np.all(ends <= 1.0 + 1e-12)

    def test_line_cloud_carries_angular_mass(self, small_geometry, screen, quad):
        pushed = push_forward(small_geometry, screen[2], 1)
        cloud = pushed.cloud(quad, AssemblyMode.LINE)
        expected = pushed.angular_mass(quad) * pushed.central_line.length
        assert cloud.weights.sum() == pytest.approx(expected, rel=1e-12)

    def test_acquisition_order_is_rotation_major(self, small_geometry, acquisition):
        assert len(acquisition) == small_geometry.measurement_count
        detectors = small_geometry.detector_count
        for i, member in enumerate(acquisition):
            assert member.rotation_index == i // detectors


# ============================================================================
# Ray data
# ============================================================================


class TestLineIntegralData:
    """Tests for line_integral_data."""

    def test_count_and_order(self):
        geometry = FanBeamGeometry()
        data = line_integral_data(geometry, lambda p: np.ones(p.shape[0]))
        assert data.shape == (384,)

    def test_constant_function_closed_form(self):
        # Rays near the axis cross the unit window from x=0 to x=1: length 1/cos(theta)
        geometry = FanBeamGeometry(rotation_angles=(0.0,))
        screen = detector_set(geometry)
        data = line_integral_data(geometry, lambda p: np.ones(p.shape[0]))
        for index in (14, 15, 16, 17):
            psi = screen[index]
            reference, _ = sp_integrate.quad(
                lambda t, psi=psi: float(psi(np.array([t]))[0]) / math.cos(t),
                psi.support.lo,
                psi.support.hi,
                epsabs=1e-14,
                epsrel=1e-13,
            )
            assert data[index] == pytest.approx(reference, rel=1e-10)

    def test_zero_function_gives_zero_data(self, small_geometry):
        assert not line_integral_data(small_geometry, lambda p: np.zeros(p.shape[0])).any()

    def test_duality_with_cone_integration(self, small_geometry, screen):
        quad = _make_matched_quad()
        by_ray = line_integral_data(small_geometry, _smooth, quad, screen)
        by_cone = np.array(
            [f.cloud(quad, AssemblyMode.CONE).integrate(_smooth) for f in acquisition_set(small_geometry, screen)]
        )
        np.testing.assert_allclose(by_cone, by_ray, rtol=1e-10, atol=1e-13)

    def test_custom_detectors(self, small_geometry):
        detectors = MeasurementSet.of([bump_1d(0.0, 0.05)])
        data = line_integral_data(small_geometry, lambda p: np.ones(p.shape[0]), detectors=detectors)
        assert data.shape == (small_geometry.rotation_count,)
        # Four-fold rotational symmetry of the square window
        np.testing.assert_allclose(data, data[0], rtol=1e-12)


class TestRayBreakpoints:
    """Ray integrals split at the rims where the integrand stops being smooth."""

    def test_phantom_reports_breakpoints(self):
        assert isinstance(Phantom.default(), RayBreakpoints)
        assert not isinstance(_smooth, RayBreakpoints)

    def test_chord_through_disc_centre(self):
        phantom = Phantom(disc_center=(0.5, 0.5), disc_radius=0.3)
        breaks = phantom.ray_breakpoints([-0.7, 0.5], [[1.0, 0.0]])
        np.testing.assert_allclose(breaks, [[0.9, 1.5]], atol=1e-14)

    def test_missed_circle_is_nan(self):
        phantom = Phantom(blobs=(Blob(center=(0.5, 0.8), radius=0.1),))
        breaks = phantom.ray_breakpoints([-0.7, 0.5], [[1.0, 0.0]])
        assert np.isnan(breaks[0, :2]).all()
        assert not np.isnan(breaks[0, 2:]).any()

    def test_tangent_angles(self):
        phantom = Phantom(disc_center=(0.5, 0.5), disc_radius=0.3)
        spread = math.asin(0.3 / 1.2)
        np.testing.assert_allclose(phantom.tangent_angles([-0.7, 0.5]), [-spread, spread], atol=1e-15)

    def test_knots_clipped_and_sorted(self):
        phantom = Phantom(disc_center=(0.5, 0.5), disc_radius=0.3)
        origin, directions = np.array([-0.7, 0.5]), np.array([[1.0, 0.0]])
        knots = ray_knots(phantom, origin, directions, np.array([1.0]), np.array([1.7]))
        np.testing.assert_allclose(knots, [[1.0, 1.0, 1.5, 1.7]], atol=1e-14)

    def test_plain_function_uses_whole_chord(self):
        knots = ray_knots(_smooth, np.zeros(2), np.array([[1.0, 0.0]]), np.array([0.2]), np.array([0.9]))
        np.testing.assert_array_equal(knots, [[0.2, 0.9]])

    def test_disc_crossed_centrally(self):
        # A narrow detector sees chords within 1e-9 of the central one
        geometry = FanBeamGeometry(rotation_angles=(0.0,))
        psi = bump_1d(0.0, 1e-5)
        data = line_integral_data(
            geometry, _UnitDisc(center=(0.5, 0.5), radius=0.3), detectors=MeasurementSet.of([psi])
        )
        expected = 0.6 * 1e-5
        assert data[0] == pytest.approx(expected, rel=1e-8)

    def test_rotation_equivariance(self):
        phantom = Phantom(blobs=(Blob(center=(0.6, 0.45), radius=0.15, amplitude=1.0),))
        angle = 0.7
        turned = line_integral_data(FanBeamGeometry(rotation_angles=(0.0,)), phantom.rotated(angle))
        original = line_integral_data(FanBeamGeometry(rotation_angles=(-angle,)), phantom)
        assert np.linalg.norm(turned - original) <= 1e-8 * np.linalg.norm(original)

    def test_rotated_phantom_values(self):
        phantom = Phantom.default()
        turned = phantom.rotated(math.pi / 2)
        point = np.array([[0.40, 0.55]])
        # A quarter turn about (0.5, 0.5) takes (0.40, 0.55) to (0.45, 0.40)
        np.testing.assert_allclose(turned(np.array([[0.45, 0.40]])), phantom(point), atol=1e-14)


class TestDiscPairing:
    """Area integrals of A psi over a disc, in coordinates centred on the disc."""

    def test_disc_crossed_centrally(self):
        geometry = FanBeamGeometry(rotation_angles=(0.0,))
        pushed = push_forward(geometry, bump_1d(0.0, 1e-5), 0)
        value = disc_pairing(pushed, lambda p: np.ones(p.shape[0]), (0.5, 0.5), 0.3)
        assert value == pytest.approx(0.6 * 1e-5, rel=1e-8)

    def test_cone_missing_disc(self):
        geometry = FanBeamGeometry(rotation_angles=(0.0,), detector_count=8)
        pushed = push_forward(geometry, detector_set(geometry)[0], 0)
        assert disc_pairing(pushed, lambda p: np.ones(p.shape[0]), (0.5, 0.9), 0.05) == 0.0

    def test_matches_ray_data(self):
        geometry = FanBeamGeometry(rotation_angles=(0.3,))
        phantom = Phantom.default()
        by_ray = line_integral_data(geometry, phantom)
        by_area = np.array(
            [
                sum(disc_pairing(f, blob, blob.center, blob.radius) for blob in phantom.blobs)
                for f in acquisition_set(geometry, detector_set(geometry))
            ]
        )
        np.testing.assert_allclose(by_area, by_ray, rtol=0, atol=1e-8 * np.abs(by_ray).max())


class TestConeLineConvergence:
    """The central-line approximation improves as detectors narrow."""

    def test_gap_shrinks_per_halving(self):
        quad = _make_matched_quad()
        gaps = []
        for count in (8, 16, 32, 64):
            geometry = FanBeamGeometry(rotation_angles=(0.0,), detector_count=count)
            # Detector containing screen angle 0.1; the intervals nest as the count doubles
            index = int((0.1 + geometry.half_opening) / (2.0 * geometry.half_opening) * count)
            psi = detector_set(geometry)[index]
            gaps.append(_relative_gap(push_forward(geometry, psi, 0), quad))
        for wide, narrow in zip(gaps[:-1], gaps[1:], strict=True):
            assert narrow * 3.0 <= wide
