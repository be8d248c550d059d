"""Tests for distfree truncated-basis comparator."""

import numpy as np
import pytest

from distfree.discretized import (
    SWEEP_HEADER,
    SweepProblem,
    SweepReport,
    SweepRow,
    KERNEL_TAIL,
    basis_rule,
    build_basis,
    kernel_coeffs,
    padded_window,
    trig_factor,
    truncated_C11,
    truncated_C12,
    truncated_C22,
    truncation_error_sweep,
)
from distfree.errors import InvalidArgumentError
from distfree.kernels import CovarianceKernel, KernelFamily, NoiseModel, acquisition_noise
from distfree.measurement import AssemblyMode
from distfree.posterior import assemble_C11, assemble_C22
from distfree.quadrature import Box


def _make_problem(coarse_pixels, acquisition, screen, kernel, data=None) -> SweepProblem:
    return SweepProblem(
        interrogation=coarse_pixels,
        acquisition=acquisition,
        screen=screen,
        kernel=kernel,
        noise=NoiseModel.white(1e-4),
        data=np.ones(len(acquisition)) if data is None else data,
        mode=AssemblyMode.LINE,
    )


# ============================================================================
# Basis
# ============================================================================


class TestBasis:
    """Tests for trig_factor and build_basis."""

    def test_factor_orthonormal_on_window(self):
        rule = basis_rule(3)
        t, w = rule.mapped(0.2, 1.7)
        values = np.column_stack([trig_factor(p, 0.2, 1.5)(t) for p in range(7)])
        np.testing.assert_allclose(values.T @ (w[:, None] * values), np.eye(7), atol=1e-12)

    def test_sizes(self):
        assert build_basis(0).size == 1
        assert build_basis(2).size == 25

    def test_orthonormality_recorded(self):
        basis = build_basis(3, Box(0.0, 2.0, -1.0, 1.0))
        assert basis.orthonormality_error < 1e-10
        assert basis.window == Box(0.0, 2.0, -1.0, 1.0)

    def test_rejects_negative_level(self):
        with pytest.raises(InvalidArgumentError):
            build_basis(-1)

    def test_values_match_members(self):
        basis = build_basis(1)
        points = np.array([[0.1, 0.2], [0.7, 0.9]])
        expected = np.column_stack([f(points) for f in basis.members])
        np.testing.assert_allclose(basis.values(points), expected, rtol=1e-14, atol=1e-15)

    def test_projection_is_idempotent(self):
        coarse, fine = build_basis(1), build_basis(3)
        coefficients = np.random.default_rng(0).standard_normal((fine.size, 2))
        once = coarse.project(coefficients, fine)
        np.testing.assert_array_equal(coarse.project(once, fine), once)
        assert np.count_nonzero(once[:, 0]) == coarse.size

    def test_projection_rejects_coarser_source(self):
        with pytest.raises(InvalidArgumentError):
            build_basis(2).project(np.zeros(1), build_basis(0))

    def test_coefficients_of_a_mode(self, quad):
        basis = build_basis(1)
        mode = basis.members[4]
        coefficients = basis.coefficients([mode.cloud(quad)])
        expected = np.zeros((basis.size, 1))
        expected[4, 0] = 1.0
        np.testing.assert_allclose(coefficients, expected, atol=1e-12)

    def test_padded_window_reach(self):
        kernel = CovarianceKernel(length_scale=0.12)
        window = padded_window(Box(0.0, 1.0, 0.0, 1.0), kernel)
        margin = 0.12 * np.sqrt(2.0 * np.log(1.0 / KERNEL_TAIL))
        np.testing.assert_allclose(
            [window.x_lo, window.x_hi, window.y_lo, window.y_hi],
            [-margin, 1.0 + margin, -margin, 1.0 + margin],
            rtol=1e-14,
        )
        assert float(kernel.from_distance(margin)) == pytest.approx(KERNEL_TAIL, rel=1e-12)

    def test_padded_window_exponential_reach(self):
        kernel = CovarianceKernel(family=KernelFamily.EXPONENTIAL, variance=3.0, length_scale=0.2)
        window = padded_window(Box(0.0, 1.0, 0.0, 2.0), kernel, tail=1e-3)
        assert window.x_lo == pytest.approx(-0.2 * np.log(1e3), rel=1e-14)
        assert window.y_hi == pytest.approx(2.0 + 0.2 * np.log(1e3), rel=1e-14)
        assert float(kernel.from_distance(-window.x_lo)) == pytest.approx(3e-3, rel=1e-12)

    @pytest.mark.parametrize("tail", [0.0, 1.0, -0.5])
    def test_padded_window_rejects_bad_tail(self, tail, kernel):
        with pytest.raises(InvalidArgumentError):
            padded_window(Box(0.0, 1.0, 0.0, 1.0), kernel, tail)


# ============================================================================
# Truncated blocks
# ============================================================================


class TestTruncatedBlocks:
    """Tests for kernel_coeffs and the truncated covariance blocks."""

    def test_kernel_coeffs_symmetric_psd(self, kernel):
        coeffs = kernel_coeffs(build_basis(2), kernel).kernel_coeffs
        np.testing.assert_array_equal(coeffs, coeffs.T)
        assert np.linalg.eigvalsh(coeffs).min() > -1e-10

    def test_kernel_coeffs_non_separable_kernel(self):
        kernel = CovarianceKernel(family=KernelFamily.EXPONENTIAL, length_scale=0.3)
        coeffs = kernel_coeffs(build_basis(1), kernel).kernel_coeffs
        np.testing.assert_array_equal(coeffs, coeffs.T)
        assert np.linalg.eigvalsh(coeffs).min() > -1e-10

    def test_constant_kernel_rank_one(self, acquisition, screen, quad):
        basis = build_basis(0)
        kernel = CovarianceKernel(variance=2.0, length_scale=1e6)
        noise = NoiseModel.white(0.0)
        c22 = truncated_C22(basis, acquisition, kernel, noise, screen, quad, AssemblyMode.LINE)
        masses = np.array([c.weights.sum() for c in acquisition.clouds(quad, AssemblyMode.LINE)])
        np.testing.assert_allclose(c22, 2.0 * np.outer(masses, masses), rtol=1e-9)

    def test_zero_kernel(self, coarse_pixels, acquisition, screen, white_noise, quad):
        basis = build_basis(1)
        kernel = CovarianceKernel(variance=0.0)
        c22 = truncated_C22(basis, acquisition, kernel, white_noise, screen, quad, AssemblyMode.LINE)
        np.testing.assert_array_equal(c22, acquisition_noise(white_noise, screen, 4, quad))
        assert not truncated_C12(basis, coarse_pixels, acquisition, kernel, quad, AssemblyMode.LINE).any()

    def test_c11_exact_for_functions_in_span(self, kernel, quad):
        inside = build_basis(1).as_measurement_set()
        truncated = truncated_C11(build_basis(2), inside, kernel, quad)
        np.testing.assert_allclose(truncated, assemble_C11(inside, kernel, quad), atol=1e-10)

    def test_c22_converges(self, acquisition, screen, white_noise, quad):
        kernel = CovarianceKernel(length_scale=0.3)
        window = padded_window(Box(0.0, 1.0, 0.0, 1.0), kernel)
        exact = assemble_C22(acquisition, kernel, white_noise, screen, quad, AssemblyMode.LINE)
        gaps = []
        for level in (1, 6, 12):
            approx = truncated_C22(build_basis(level, window), acquisition, kernel, white_noise, screen, quad, AssemblyMode.LINE)
            gaps.append(np.abs(approx - exact).max() / np.abs(exact).max())
        assert gaps[1] < gaps[0]
        assert gaps[2] < 1e-3

    def test_prior_trace_contracts(self, acquisition, screen, kernel, quad):
        silent = NoiseModel.white(0.0)
        window = padded_window(Box(0.0, 1.0, 0.0, 1.0), kernel)
        full = np.trace(assemble_C22(acquisition, kernel, silent, screen, quad, AssemblyMode.LINE))
        for level in (0, 2, 4, 8):
            truncated = truncated_C22(build_basis(level, window), acquisition, kernel, silent, screen, quad, AssemblyMode.LINE)
            assert np.trace(truncated) <= full + 1e-8


# ============================================================================
# Sweep
# ============================================================================


class TestSweep:
    """Tests for truncation_error_sweep and its report."""

    def test_errors_decrease_with_level(self, coarse_pixels, acquisition, screen, kernel):
        report = truncation_error_sweep([0, 1, 2, 4], _make_problem(coarse_pixels, acquisition, screen, kernel))
        errors = report.column("rel_err_C22")
        assert len(errors) == 4
        for before, after in zip(errors[:-1], errors[1:], strict=True):
            assert after <= 1.05 * before
        assert errors[-1] < errors[0]

    def test_single_level_single_row(self, coarse_pixels, acquisition, screen, kernel):
        report = truncation_error_sweep([2], _make_problem(coarse_pixels, acquisition, screen, kernel))
        lines = report.to_csv().splitlines()
        assert lines[0] == "level,rel_err_C22,rel_err_C12,rel_err_mean"
        assert len(lines) == 2
        assert lines[1].startswith("2,")

    @pytest.mark.parametrize("levels", [[], [2, 1], [1, 1], [-1, 0]])
    def test_rejects_bad_levels(self, levels, coarse_pixels, acquisition, screen, kernel):
        with pytest.raises(InvalidArgumentError):
            truncation_error_sweep(levels, _make_problem(coarse_pixels, acquisition, screen, kernel))

    def test_report_csv_file(self, tmp_path):
        report = SweepReport(rows=[SweepRow(level=0, rel_err_C22=0.5, rel_err_C12=0.25, rel_err_mean=0.125, rel_err_C11=1.0)])
        path = report.write_csv(tmp_path / "sweep.csv")
        assert path.read_bytes() == b"level,rel_err_C22,rel_err_C12,rel_err_mean\n0,0.5,0.25,0.125\n"
        assert SWEEP_HEADER == ("level", "rel_err_C22", "rel_err_C12", "rel_err_mean")
