"""Truncation error of the discretized comparator against the free blocks."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from distfree.discretized.basis import KERNEL_TAIL, build_basis, padded_window
from distfree.discretized.truncation import (
    kernel_coeffs,
    truncated_C11,
    truncated_C12,
    truncated_C22,
)
from distfree.errors import InvalidArgumentError
from distfree.kernels import CovarianceKernel, NoiseModel
from distfree.measurement import AssemblyMode, MeasurementSet
from distfree.posterior import CholeskySolver, assemble_C11, assemble_C12, assemble_C22
from distfree.quadrature import Box, QuadratureConfig
from distfree.reports.files import format_csv

logger = logging.getLogger(__name__)

SWEEP_HEADER = ("level", "rel_err_C22", "rel_err_C12", "rel_err_mean")


@dataclass(frozen=True, eq=False)
class SweepProblem:
    """A fixed assembled instance the truncation levels are compared on.

    Modes live on ``window`` grown by the kernel reach at ``tail``; a tail of
    None keeps them on ``window`` itself.
    """

    interrogation: MeasurementSet
    acquisition: MeasurementSet
    screen: MeasurementSet
    kernel: CovarianceKernel
    noise: NoiseModel
    data: NDArray[np.float64]
    window: Box = field(default_factory=lambda: Box(0.0, 1.0, 0.0, 1.0))
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    mode: AssemblyMode = AssemblyMode.CONE
    tail: float | None = KERNEL_TAIL

    @property
    def basis_window(self) -> Box:
        if self.tail is None:
            return self.window
        return padded_window(self.window, self.kernel, self.tail)


@dataclass(frozen=True)
class SweepRow:
    """Frobenius-relative errors at one truncation level."""

    level: int
    rel_err_C22: float
    rel_err_C12: float
    rel_err_mean: float
    rel_err_C11: float


@dataclass
class SweepReport:
    """Rows of a truncation sweep, in increasing level order."""

    rows: list[SweepRow] = field(default_factory=list)

    def column(self, name: str) -> list[float]:
        return [getattr(row, name) for row in self.rows]

    def to_csv(self) -> str:
        return format_csv(
            SWEEP_HEADER,
            [[row.level, row.rel_err_C22, row.rel_err_C12, row.rel_err_mean] for row in self.rows],
        )

    def write_csv(self, path: Path | str) -> Path:
        path = Path(path)
        path.write_text(self.to_csv(), encoding="utf-8", newline="\n")
        return path


def _relative(approx: NDArray[np.float64], exact: NDArray[np.float64]) -> float:
    scale = float(np.linalg.norm(exact))
    if scale == 0.0:
        return float(np.linalg.norm(approx))
    return float(np.linalg.norm(approx - exact)) / scale


def _posterior_mean(
    c12: NDArray[np.float64], c22: NDArray[np.float64], z: NDArray[np.float64]
) -> NDArray[np.float64]:
    return c12 @ CholeskySolver(c22).data_solve(z)


def truncation_error_sweep(levels: Sequence[int], problem: SweepProblem) -> SweepReport:
    """Compare truncated blocks with the discretization-free ones level by level.

    Args:
        levels: Strictly increasing truncation levels (frequencies per axis)
        problem: Measurement sets, kernels and the data vector

    Returns:
        SweepReport with one row per level

    Raises:
        InvalidArgumentError: If levels are empty, negative or not increasing
    """
    levels = list(levels)
    if not levels:
        raise InvalidArgumentError("at least one truncation level is required")
    if levels[0] < 0 or any(b <= a for a, b in zip(levels, levels[1:])):
        raise InvalidArgumentError(f"truncation levels must be increasing and >= 0, got {levels}")

    quad, mode = problem.quad, problem.mode
    c11 = assemble_C11(problem.interrogation, problem.kernel, quad, mode)
    c12 = assemble_C12(problem.interrogation, problem.acquisition, problem.kernel, quad, mode)
    c22 = assemble_C22(problem.acquisition, problem.kernel, problem.noise, problem.screen, quad, mode)
    mean = _posterior_mean(c12, c22, problem.data)

    window = problem.basis_window
    report = SweepReport()
    for level in levels:
        basis = build_basis(level, window)
        covariance = kernel_coeffs(basis, problem.kernel)
        c22_n = truncated_C22(
            basis, problem.acquisition, problem.kernel, problem.noise, problem.screen,
            quad, mode, covariance,
        )
        c12_n = truncated_C12(basis, problem.interrogation, problem.acquisition, problem.kernel, quad, mode)
        c11_n = truncated_C11(basis, problem.interrogation, problem.kernel, quad, mode, covariance)
        row = SweepRow(
            level=level,
            rel_err_C22=_relative(c22_n, c22),
            rel_err_C12=_relative(c12_n, c12),
            rel_err_mean=_relative(_posterior_mean(c12_n, c22_n, problem.data), mean),
            rel_err_C11=_relative(c11_n, c11),
        )
        logger.info(
            f"Truncation level {level} ({basis.size} modes): C22 {row.rel_err_C22:.3e}, "
            f"C12 {row.rel_err_C12:.3e}, mean {row.rel_err_mean:.3e}, C11 {row.rel_err_C11:.3e}"
        )
        report.rows.append(row)
    return report
