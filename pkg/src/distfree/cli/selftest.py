"""Built-in consistency checks run by `distfree selftest`."""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from distfree.config import RunConfig
from distfree.errors import InternalConsistencyError
from distfree.geometry import acquisition_set, detector_set, disc_pairing, line_integral_data
from distfree.kernels import NoiseModel, acquisition_noise
from distfree.measurement import AssemblyMode, MeasurementSet
from distfree.posterior import (
    JointCovariance,
    check_denoising_structure,
    condition,
    dense_conditional_moments,
    denoising_structure,
    smw_equivalence_check,
)

logger = logging.getLogger(__name__)

SMW_TOL = 1e-9
ORACLE_TOL = 1e-10
DUALITY_TOL = 1e-6


@dataclass
class CheckResult:
    """Outcome of one named check."""

    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def as_row(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "value": self.value,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


@dataclass
class SelfTestHooks:
    """Fault injection points for testing the checks themselves."""

    corrupt_denoising_joint: Callable[[JointCovariance], JointCovariance] | None = None
    extra_checks: list[Callable[[RunConfig], CheckResult]] = field(default_factory=list)


def _random_spd(rng: np.random.Generator, size: int) -> np.ndarray:
    b = rng.standard_normal((size, size))
    return b @ b.T + size * np.eye(size)


def check_smw_equivalence(config: RunConfig, instances: int = 100) -> CheckResult:
    """Information and covariance forms of the posterior on random instances."""
    rng = np.random.default_rng(config.run.seed)
    worst = 0.0
    for _ in range(instances):
        n, m = (int(v) for v in rng.integers(1, 21, size=2))
        report = smw_equivalence_check(
            rng.standard_normal((n, m)),
            _random_spd(rng, n),
            _random_spd(rng, m),
            rng.standard_normal(n),
            rng.standard_normal(m),
        )
        worst = max(worst, report.discrepancy)
    return CheckResult("smw_equivalence", worst <= SMW_TOL, worst, SMW_TOL, f"{instances} instances")


def check_conditioning_oracle(config: RunConfig, instances: int = 200) -> CheckResult:
    """Schur-complement conditioning against the precision-matrix oracle."""
    rng = np.random.default_rng(config.run.seed + 1)
    worst = 0.0
    for _ in range(instances):
        total = int(rng.integers(2, 7))
        n = int(rng.integers(1, total))
        matrix = _random_spd(rng, total)
        z = rng.standard_normal(total - n)
        result = condition(JointCovariance.from_matrix(matrix, n), z)
        mean, covariance = dense_conditional_moments(matrix, n, z)
        worst = max(
            worst,
            float(np.linalg.norm(result.mean - mean)) / max(float(np.linalg.norm(mean)), 1.0),
            float(np.linalg.norm(result.covariance - covariance)) / float(np.linalg.norm(covariance)),
        )
    return CheckResult(
        "conditioning_oracle", worst <= ORACLE_TOL, worst, ORACLE_TOL, f"{instances} instances"
    )


def check_denoising(config: RunConfig, hooks: SelfTestHooks | None = None) -> CheckResult:
    """Block identities of the joint covariance when Phi = A Psi."""
    geometry = config.geometry.model_copy(
        update={"rotation_angles": (config.geometry.rotation_angles[0],), "detector_count": 8}
    )
    screen = detector_set(geometry)
    noise = NoiseModel.white(1e-4)
    joint = denoising_structure(
        screen, geometry, config.kernel, noise, config.quadrature, AssemblyMode.CONE, check=False
    )
    if hooks is not None and hooks.corrupt_denoising_joint is not None:
        joint = hooks.corrupt_denoising_joint(joint)
    sigma = acquisition_noise(noise, screen, geometry.rotation_count, config.quadrature)
    try:
        deviation = check_denoising_structure(joint, sigma)
    except InternalConsistencyError as e:
        return CheckResult("denoising_structure", False, float("nan"), 1e-10, str(e))
    return CheckResult("denoising_structure", True, deviation, 1e-10, f"m={joint.m}")


def check_duality(config: RunConfig, rays: int = 16) -> CheckResult:
    """Ray transform of the phantom versus the area integral of A psi_k times it.

    The area side integrates each blob over its own disc in polar coordinates
    about the blob centre, so it shares no nodes with the ray transform.
    """
    geometry = config.geometry.model_copy(
        update={"rotation_angles": (config.geometry.rotation_angles[0],)}
    )
    screen = detector_set(geometry)
    picks = np.unique(np.linspace(0, len(screen) - 1, min(rays, len(screen))).round().astype(int))
    chosen = MeasurementSet.of([screen[int(i)] for i in picks])
    by_ray = line_integral_data(geometry, config.phantom, config.quadrature, chosen)
    by_area = np.array(
        [
            sum(disc_pairing(f, blob, blob.center, blob.radius) for blob in config.phantom.blobs)
            for f in acquisition_set(geometry, chosen)
        ]
    )
    scale = max(float(np.abs(by_ray).max(initial=0.0)), np.finfo(float).tiny)
    gap = float(np.abs(by_area - by_ray).max()) / scale
    return CheckResult("duality_consistency", gap <= DUALITY_TOL, gap, DUALITY_TOL, f"{len(chosen)} rays")


def run_checks(config: RunConfig, hooks: SelfTestHooks | None = None) -> list[CheckResult]:
    results = [
        check_smw_equivalence(config),
        check_conditioning_oracle(config),
        check_denoising(config, hooks),
        check_duality(config),
    ]
    if hooks is not None:
        results.extend(check(config) for check in hooks.extra_checks)
    for result in results:
        level = logging.INFO if result.passed else logging.ERROR
        logger.log(level, f"Check {result.name}: {'pass' if result.passed else 'FAIL'} ({result.value:.3g})")
    return results
