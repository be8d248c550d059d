"""Tests for distfree covariance kernels, noise models and Gram assembly."""

import math

import numpy as np
import pytest

from distfree.config import get_settings
from distfree.kernels import (
    CovarianceKernel,
    KernelFamily,
    MeanFunction,
    NoiseKind,
    NoiseModel,
    acquisition_noise,
    cross_gram,
    kernel_eval,
    merge_nodes,
    noise_gram,
    separable_gram,
    translated_gram,
)
from distfree.measurement import MeasurementSet, bump_1d
from distfree.quadrature import QuadratureCloud, QuadratureConfig


def _make_cloud(points, weights) -> QuadratureCloud:
    return QuadratureCloud(points=np.asarray(points, dtype=float), weights=np.asarray(weights, dtype=float))


def _make_screen(count: int = 4, fill: float = 0.95) -> MeasurementSet:
    width = 1.0 / count
    return MeasurementSet.of(
        [bump_1d(-0.5 + (k + 0.5) * width, 0.5 * fill * width) for k in range(count)]
    )


# ============================================================================
# Kernels
# ============================================================================


class TestCovarianceKernel:
    """Tests for CovarianceKernel evaluation."""

    def test_squared_exponential_value(self):
        kernel = CovarianceKernel(variance=2.0, length_scale=0.5)
        assert math.isclose(kernel_eval(kernel, [0.5, 0.0]), 2.0 * math.exp(-0.5), rel_tol=1e-15)

    def test_exponential_value(self):
        kernel = CovarianceKernel(family=KernelFamily.EXPONENTIAL, variance=1.0, length_scale=0.25)
        assert math.isclose(kernel_eval(kernel, [0.3, 0.4]), math.exp(-2.0), rel_tol=1e-15)

    def test_peak_at_zero_and_symmetry(self):
        kernel = CovarianceKernel(variance=3.0)
        assert kernel_eval(kernel, [0.0, 0.0]) == 3.0
        r = np.array([[0.1, -0.2], [-0.1, 0.2]])
        values = kernel_eval(kernel, r)
        assert values[0] == values[1]

    def test_one_dimensional_kernel(self):
        kernel = CovarianceKernel(variance=1.0, length_scale=1.0, dimension=1)
        assert math.isclose(kernel_eval(kernel, -1.0), math.exp(-0.5), rel_tol=1e-15)

    def test_separable_factorization(self):
        kernel = CovarianceKernel(variance=1.5, length_scale=0.3)
        x = np.array([[0.1, 0.2], [0.7, 0.4]])
        y = np.array([[0.3, 0.9]])
        product = kernel.variance * kernel.axis_factor(x[:, 0], y[:, 0]) * kernel.axis_factor(x[:, 1], y[:, 1])
        np.testing.assert_allclose(kernel.cross(x, y), product, rtol=1e-14)

    @pytest.mark.parametrize("family", list(KernelFamily))
    def test_reach_meets_tail(self, family):
        kernel = CovarianceKernel(family=family, variance=2.0, length_scale=0.15)
        reach = kernel.reach(1e-4)
        assert math.isclose(float(kernel.from_distance(reach)), 2e-4, rel_tol=1e-12)
        assert kernel.from_distance(1.01 * reach) < 2e-4

    def test_exponential_is_not_separable(self):
        assert CovarianceKernel(family=KernelFamily.EXPONENTIAL).is_separable is False

    def test_rejects_negative_variance(self):
        with pytest.raises(ValueError):
            CovarianceKernel(variance=-1.0)

    def test_rejects_nonpositive_length_scale(self):
        with pytest.raises(ValueError):
            CovarianceKernel(length_scale=0.0)


# ============================================================================
# Gram assembly
# ============================================================================


class TestGram:
    """Tests for merge_nodes, cross_gram, separable_gram and translated_gram."""

    def test_merge_nodes_sums_shared_weights(self):
        a = _make_cloud([0.0, 1.0], [1.0, 2.0])
        b = _make_cloud([1.0, 2.0], [3.0, 4.0])
        points, selection = merge_nodes([a, b])
        np.testing.assert_array_equal(points, [0.0, 1.0, 2.0])
        np.testing.assert_array_equal(selection.toarray(), [[1.0, 0.0], [2.0, 3.0], [0.0, 4.0]])

    def test_cross_gram_matches_double_loop(self):
        kernel = CovarianceKernel(variance=1.0, length_scale=0.4)
        rng = np.random.default_rng(3)
        clouds_a = [_make_cloud(rng.random((5, 2)), rng.random(5)) for _ in range(3)]
        clouds_b = [_make_cloud(rng.random((4, 2)), rng.random(4)) for _ in range(2)]
        expected = np.array(
            [[a.weights @ kernel.cross(a.points, b.points) @ b.weights for b in clouds_b] for a in clouds_a]
        )
        np.testing.assert_allclose(cross_gram(clouds_a, clouds_b, kernel.cross), expected, rtol=1e-13)

    def test_cross_gram_symmetric_flag(self):
        kernel = CovarianceKernel(variance=1.0, length_scale=0.4)
        rng = np.random.default_rng(4)
        clouds = [_make_cloud(rng.random((6, 2)), rng.random(6)) for _ in range(4)]
        gram = cross_gram(clouds, clouds, kernel.cross, symmetric=True)
        np.testing.assert_array_equal(gram, gram.T)
        assert np.all(np.linalg.eigvalsh(gram) > -1e-12)

    def test_cross_gram_chunked_threads_match_single_chunk(self, monkeypatch):
        kernel = CovarianceKernel(variance=1.0, length_scale=0.4)
        rng = np.random.default_rng(5)
        clouds = [_make_cloud(rng.random((400, 2)), rng.random(400)) for _ in range(3)]
        whole = cross_gram(clouds, clouds, kernel.cross)
        monkeypatch.setenv("DISTFREE_ASSEMBLY_CHUNK_ENTRIES", "2048")
        monkeypatch.setenv("DISTFREE_ASSEMBLY_WORKERS", "3")
        get_settings.cache_clear()
        chunked = cross_gram(clouds, clouds, kernel.cross)
        np.testing.assert_allclose(chunked, whole, rtol=1e-12)

    def test_empty_clouds_give_zero_entries(self):
        kernel = CovarianceKernel()
        gram = cross_gram([QuadratureCloud.empty(2)], [_make_cloud([[0.5, 0.5]], [1.0])], kernel.cross)
        assert gram.shape == (1, 1)
        assert gram[0, 0] == 0.0

    def test_separable_gram_matches_general(self):
        kernel = CovarianceKernel(variance=2.0, length_scale=0.3)
        x = _make_cloud([0.1, 0.4, 0.5], [0.2, 0.5, 0.3])
        y = _make_cloud([0.2, 0.9], [0.6, 0.4])
        # 2-D cloud of the tensor product of the two axis clouds
        xx, yy = np.meshgrid(x.points, y.points, indexing="ij")
        full = _make_cloud(np.column_stack([xx.ravel(), yy.ravel()]), np.outer(x.weights, y.weights).ravel())
        separable = separable_gram([(x, y)], [(x, y)], kernel.axis_factor, kernel.variance)
        general = cross_gram([full], [full], kernel.cross)
        np.testing.assert_allclose(separable, general, rtol=1e-13)

    def test_translated_gram_matches_general(self):
        kernel = CovarianceKernel(family=KernelFamily.EXPONENTIAL, length_scale=0.2)
        base = np.array([[0.0, 0.0], [0.05, 0.0], [0.0, 0.05]])
        weights = np.array([0.5, 0.3, 0.2])
        anchors = [(0.1, 0.1), (0.3, 0.1), (0.5, 0.1), (0.1, 0.3)]
        clouds = [_make_cloud(base + np.array(a), weights) for a in anchors]
        keys = [("tri", a) for a in anchors]
        np.testing.assert_allclose(
            translated_gram(clouds, keys, kernel.cross),
            cross_gram(clouds, clouds, kernel.cross, symmetric=True),
            rtol=1e-12,
        )


# ============================================================================
# Noise
# ============================================================================


class TestNoiseModel:
    """Tests for NoiseModel and the noise Gram matrices."""

    def test_white_noise_gram_is_diagonal(self, quad):
        screen = _make_screen(4)
        sigma = noise_gram(NoiseModel.white(0.5), screen, quad)
        np.testing.assert_array_equal(sigma, np.diag(np.diag(sigma)))
        # integral of cos^4 over a bump of half-width h is 3h/4
        h = 0.5 * 0.95 / 4
        np.testing.assert_allclose(np.diag(sigma), 0.5 * 0.75 * h, rtol=1e-12)

    def test_zero_noise(self, quad):
        assert NoiseModel.white(0.0).is_zero
        assert not noise_gram(NoiseModel.white(0.0), _make_screen(3), quad).any()

    def test_kernel_noise_is_symmetric_psd(self, quad):
        noise = NoiseModel(
            kind=NoiseKind.KERNEL,
            kernel=CovarianceKernel(variance=1e-2, length_scale=0.1, dimension=1),
        )
        sigma = noise_gram(noise, _make_screen(5), quad)
        np.testing.assert_allclose(sigma, sigma.T, rtol=0, atol=1e-18)
        assert np.linalg.eigvalsh(sigma).min() > -1e-14
        assert np.count_nonzero(sigma - np.diag(np.diag(sigma))) > 0

    def test_kernel_noise_requires_one_dimensional_kernel(self):
        with pytest.raises(ValueError):
            NoiseModel(kind=NoiseKind.KERNEL, kernel=CovarianceKernel(dimension=2))

    def test_acquisition_noise_is_block_diagonal(self, quad):
        screen = _make_screen(3)
        block = noise_gram(NoiseModel.white(1.0), screen, quad)
        full = acquisition_noise(NoiseModel.white(1.0), screen, 2, quad)
        assert full.shape == (6, 6)
        np.testing.assert_array_equal(full[:3, :3], block)
        np.testing.assert_array_equal(full[3:, 3:], block)
        assert not full[:3, 3:].any()


class TestMeanFunction:
    """Tests for MeanFunction."""

    def test_zero_by_default(self):
        mean = MeanFunction()
        assert mean.is_zero
        np.testing.assert_array_equal(mean(np.ones((3, 2))), np.zeros(3))

    def test_of_wraps_function(self):
        mean = MeanFunction.of(lambda p: p[:, 0] + 1.0)
        assert not mean.is_zero
        np.testing.assert_array_equal(mean(np.array([[1.0, 0.0]])), [2.0])
