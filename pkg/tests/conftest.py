"""Pytest fixtures for distfree tests."""

from pathlib import Path

import pytest

from distfree.config import RunConfig, get_settings
from distfree.geometry import FanBeamGeometry, acquisition_set, detector_set
from distfree.kernels import CovarianceKernel, NoiseModel
from distfree.measurement import MeasurementSet, PixelGrid, pixel_bumps
from distfree.phantom import Phantom
from distfree.quadrature import QuadratureConfig


@pytest.fixture(autouse=True)
def clear_settings_cache():
    """Settings are cached per process; tests that patch the environment need a fresh copy."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def project_root() -> Path:
    """Get project root directory."""
    return Path(__file__).parent.parent


@pytest.fixture
def quad() -> QuadratureConfig:
    """Default quadrature node counts."""
    return QuadratureConfig()


@pytest.fixture
def kernel() -> CovarianceKernel:
    """Squared-exponential prior used in the example configuration."""
    return CovarianceKernel(variance=1.0, length_scale=0.12)


@pytest.fixture
def small_geometry() -> FanBeamGeometry:
    """Four rotations of eight detectors: fast enough for cone-mode assembly."""
    return FanBeamGeometry.with_uniform_rotations(4, detector_count=8)


@pytest.fixture
def screen(small_geometry: FanBeamGeometry) -> MeasurementSet:
    """Device functions of the small geometry."""
    return detector_set(small_geometry)


@pytest.fixture
def acquisition(small_geometry: FanBeamGeometry, screen: MeasurementSet) -> MeasurementSet:
    """Pushed device functions of the small geometry."""
    return acquisition_set(small_geometry, screen)


@pytest.fixture
def coarse_grid() -> PixelGrid:
    """4 x 4 pixels on the unit square."""
    return PixelGrid(side_count=4)


@pytest.fixture
def coarse_pixels(coarse_grid: PixelGrid) -> MeasurementSet:
    """Pixel bumps of the coarse grid."""
    return pixel_bumps(coarse_grid)


@pytest.fixture
def white_noise() -> NoiseModel:
    """Small white noise keeping C22 well conditioned."""
    return NoiseModel.white(1e-4)


@pytest.fixture
def phantom() -> Phantom:
    """Two-blob example phantom."""
    return Phantom.default()


@pytest.fixture
def small_config(tmp_path: Path) -> RunConfig:
    """Run configuration small enough for end-to-end command tests."""
    text = f"""
[geometry]
rotation_count = 4
detector_count = 12

[grid]
side_count = 4

[run]
mode = point-line
seed = 7
output_dir = {tmp_path / "out"}
truncation_levels = [0, 1, 2]
compare_grid_size = 4
"""
    return RunConfig.from_text(text)
