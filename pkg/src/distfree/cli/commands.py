"""Subcommand implementations: forward, invert, compare and selftest.

Each command reads a validated RunConfig, writes its files into
``config.run.output_dir`` and returns a process exit code. Library errors
propagate to ``main`` which maps them to exit codes.
"""

import logging
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from distfree.cli.selftest import SelfTestHooks, run_checks
from distfree.config import RunConfig
from distfree.discretized import SweepProblem, truncation_error_sweep
from distfree.errors import ConfigError
from distfree.geometry import acquisition_set, detector_set, line_integral_data
from distfree.measurement import AssemblyMode, pixel_bumps
from distfree.phantom import generate_data, ground_truth_measurement, rasterize
from distfree.posterior import assemble_C11, assemble_C12, assemble_joint, condition, reinterrogate
from distfree.reports import (
    ReportGenerator,
    read_data_csv,
    write_csv,
    write_data_csv,
    write_pgm,
    write_vector_csv,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1

CLEAN_DATA = "data_clean.csv"
NOISY_DATA = "data_noisy.csv"


def _output_dir(config: RunConfig) -> Path:
    out = Path(config.run.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _read_input(path: Path) -> NDArray[np.float64]:
    if not path.is_file():
        raise ConfigError(f"missing input file {path} (run 'distfree forward' first)")
    return read_data_csv(path)


def _relative_error(estimate: NDArray[np.float64], truth: NDArray[np.float64]) -> float:
    scale = float(np.linalg.norm(truth))
    if scale == 0.0:
        return float(np.linalg.norm(estimate))
    return float(np.linalg.norm(estimate - truth)) / scale


def cmd_forward(config: RunConfig) -> int:
    """Simulate noiseless and noisy data for the configured phantom."""
    out = _output_dir(config)
    geometry = config.geometry
    logger.info(f"Geometry: {geometry.summary()}")

    clean = line_integral_data(geometry, config.phantom, config.quadrature)
    noise = config.noise_model(clean)
    noisy = generate_data(config.phantom, geometry, noise, config.run.seed, config.quadrature, clean=clean)

    write_data_csv(out / CLEAN_DATA, clean, geometry.detector_count, geometry.rotation_angles)
    write_data_csv(out / NOISY_DATA, noisy, geometry.detector_count, geometry.rotation_angles)
    reports = ReportGenerator()
    reports.save(reports.render_geometry(geometry.summary()), out / "geometry.txt")
    grid = config.pixel_grid()
    write_pgm(out / "phantom.pgm", rasterize(config.phantom, grid), grid.side_count)
    logger.info(f"Wrote {clean.size} data values to {out}")
    return EXIT_OK


def cmd_invert(config: RunConfig) -> int:
    """Posterior mean and variance on the pixel grid from the noisy data."""
    out = _output_dir(config)
    noisy = _read_input(out / NOISY_DATA)
    clean = _read_input(out / CLEAN_DATA)
    geometry, quad, mode = config.geometry, config.quadrature, config.run.mode
    if noisy.size != geometry.measurement_count:
        raise ConfigError(
            f"{out / NOISY_DATA} has {noisy.size} values, geometry expects {geometry.measurement_count}"
        )

    screen = detector_set(geometry)
    acquisition = acquisition_set(geometry, screen)
    grid = config.pixel_grid()
    pixels = pixel_bumps(grid, config.grid.fill)
    noise = config.noise_model(clean)

    joint = assemble_joint(pixels, acquisition, config.kernel, noise, screen, quad, mode)
    result = condition(joint, noisy)

    write_pgm(out / "mean.pgm", result.mean, grid.side_count)
    write_pgm(out / "var.pgm", result.variance, grid.side_count)
    write_vector_csv(out / "mean.csv", result.mean)
    write_vector_csv(out / "var.csv", result.variance)
    write_vector_csv(out / "btilde.csv", result.data_solve)

    truth = ground_truth_measurement(config.phantom, pixels, quad, AssemblyMode.CONE)
    error = _relative_error(result.mean, truth)
    baseline = _relative_error(np.zeros_like(truth), truth)
    logger.info(f"Relative L2 error of the posterior mean: {error:.4g} (zero estimator {baseline:.4g})")
    write_csv(
        out / "metrics.csv",
        ("metric", "value"),
        [
            ("rel_l2_error", error),
            ("rel_l2_error_zero", baseline),
            ("jitter", result.jitter_used),
            ("min_variance", float(np.min(result.variance))),
        ],
    )

    for size in config.run.reinterrogate_sizes:
        finer = pixel_bumps(config.pixel_grid(size), config.grid.fill)
        update = reinterrogate(
            result,
            assemble_C12(finer, acquisition, config.kernel, quad, mode),
            assemble_C11(finer, config.kernel, quad, mode),
            joint,
        )
        write_pgm(out / f"mean_{size}.pgm", update.mean, size)
        write_vector_csv(out / f"mean_{size}.csv", update.mean)
        write_vector_csv(out / f"var_{size}.csv", update.variance)
    return EXIT_OK


def cmd_compare(config: RunConfig) -> int:
    """Truncation sweep of the basis comparator on a coarse pixel grid."""
    out = _output_dir(config)
    geometry, quad = config.geometry, config.quadrature
    clean = line_integral_data(geometry, config.phantom, quad)
    noise = config.noise_model(clean)
    data = generate_data(config.phantom, geometry, noise, config.run.seed, quad, clean=clean)

    screen = detector_set(geometry)
    problem = SweepProblem(
        interrogation=pixel_bumps(config.pixel_grid(config.run.compare_grid_size), config.grid.fill),
        acquisition=acquisition_set(geometry, screen),
        screen=screen,
        kernel=config.kernel,
        noise=noise,
        data=data,
        window=geometry.window_box,
        quad=quad,
        mode=config.run.mode,
    )
    report = truncation_error_sweep(config.run.truncation_levels, problem)
    report.write_csv(out / "sweep.csv")
    logger.info(f"Wrote {len(report.rows)} sweep rows to {out / 'sweep.csv'}")
    return EXIT_OK


def cmd_selftest(config: RunConfig, hooks: SelfTestHooks | None = None) -> int:
    """Run the consistency checks and print the pass/fail table."""
    results = run_checks(config, hooks)
    print(ReportGenerator().render_selftest([r.as_row() for r in results]), end="")
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error(f"Failed checks: {', '.join(failed)}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


COMMANDS = {
    "forward": cmd_forward,
    "invert": cmd_invert,
    "compare": cmd_compare,
    "selftest": cmd_selftest,
}
