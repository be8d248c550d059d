"""Tests for distfree phantoms and simulated data."""

import math

import numpy as np
import pytest

from distfree.errors import InvalidArgumentError
from distfree.geometry import detector_set, line_integral_data
from distfree.kernels import NoiseModel, noise_gram
from distfree.measurement import PixelGrid
from distfree.phantom import (
    Blob,
    Phantom,
    calibrate_white_noise,
    eval_phantom,
    generate_data,
    ground_truth_measurement,
    rasterize,
)


class TestPhantom:
    """Tests for Blob and Phantom."""

    def test_blob_profile(self):
        blob = Blob(center=(0.5, 0.5), radius=0.2, amplitude=2.0)
        values = blob(np.array([[0.5, 0.5], [0.6, 0.5], [0.7, 0.5]]))
        np.testing.assert_allclose(values, [2.0, 1.0, 0.0], atol=1e-15)

    def test_default_phantom_values(self, phantom):
        assert float(eval_phantom(phantom, [0.40, 0.55])) == pytest.approx(1.0, abs=1e-3)
        assert float(eval_phantom(phantom, [0.05, 0.05])) == 0.0

    def test_rejects_blob_outside_disc(self):
        with pytest.raises(ValueError, match="blob 1"):
            Phantom(blobs=(Blob(center=(0.8, 0.5), radius=0.2),))

    def test_combine_is_linear(self, phantom):
        other = Phantom(blobs=(Blob(center=(0.5, 0.3), radius=0.1, amplitude=0.5),))
        combined = phantom.combine(other, 2.0, -1.0)
        points = np.random.default_rng(0).random((50, 2))
        np.testing.assert_allclose(combined(points), 2.0 * phantom(points) - other(points), atol=1e-14)

    def test_rasterize_pixel_order(self, phantom):
        grid = PixelGrid(side_count=8)
        values = rasterize(phantom, grid)
        assert values.shape == (64,)
        np.testing.assert_array_equal(values, eval_phantom(phantom, grid.centers()))


class TestGenerateData:
    """Tests for generate_data and noise calibration."""

    def test_zero_noise_returns_clean_data(self, phantom, small_geometry):
        clean = line_integral_data(small_geometry, phantom)
        data = generate_data(phantom, small_geometry, NoiseModel.white(0.0), seed=1, clean=clean)
        np.testing.assert_array_equal(data, clean)

    def test_same_seed_same_data(self, phantom, small_geometry):
        noise = NoiseModel.white(1e-3)
        first = generate_data(phantom, small_geometry, noise, seed=42)
        second = generate_data(phantom, small_geometry, noise, seed=42)
        np.testing.assert_array_equal(first, second)
        assert not np.array_equal(first, generate_data(phantom, small_geometry, noise, seed=43))

    def test_linear_in_phantom(self, phantom, small_geometry):
        other = Phantom(blobs=(Blob(center=(0.5, 0.3), radius=0.1),))
        combined = line_integral_data(small_geometry, phantom.combine(other, 1.5, 0.5))
        separate = 1.5 * line_integral_data(small_geometry, phantom) + 0.5 * line_integral_data(small_geometry, other)
        # The combined phantom splits its rays at the union of both rim sets
        assert np.linalg.norm(combined - separate) <= 1e-11 * np.linalg.norm(separate)

    def test_calibrated_noise_std_is_fraction_of_peak(self, phantom, small_geometry, quad):
        clean = line_integral_data(small_geometry, phantom, quad)
        noise = calibrate_white_noise(clean, 0.01, small_geometry, quad)
        std = math.sqrt(np.diag(noise_gram(noise, detector_set(small_geometry), quad)).max())
        assert std == pytest.approx(0.01 * np.abs(clean).max(), rel=1e-12)

    def test_calibration_zero_level(self, phantom, small_geometry):
        assert calibrate_white_noise(np.ones(3), 0.0, small_geometry).is_zero

    def test_calibration_rejects_negative_level(self, small_geometry):
        with pytest.raises(InvalidArgumentError):
            calibrate_white_noise(np.ones(3), -0.1, small_geometry)

    def test_ground_truth_is_local_average(self, phantom, coarse_grid, coarse_pixels):
        truth = ground_truth_measurement(phantom, coarse_pixels)
        assert truth.shape == (16,)
        assert np.all(truth >= 0.0)
        assert truth.max() <= 1.0 + 1e-12
