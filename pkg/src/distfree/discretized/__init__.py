"""Trigonometric truncation comparator."""

from distfree.discretized.basis import (
    KERNEL_TAIL,
    TruncationBasis,
    basis_rule,
    build_basis,
    padded_window,
    trig_factor,
)
from distfree.discretized.sweep import (
    SWEEP_HEADER,
    SweepProblem,
    SweepReport,
    SweepRow,
    truncation_error_sweep,
)
from distfree.discretized.truncation import (
    TruncatedCovariance,
    interrogation_basis_gram,
    kernel_coeffs,
    truncated_C11,
    truncated_C12,
    truncated_C22,
)

__all__ = [
    "TruncationBasis",
    "trig_factor",
    "basis_rule",
    "build_basis",
    "KERNEL_TAIL",
    "padded_window",
    "TruncatedCovariance",
    "kernel_coeffs",
    "interrogation_basis_gram",
    "truncated_C11",
    "truncated_C12",
    "truncated_C22",
    "SWEEP_HEADER",
    "SweepProblem",
    "SweepRow",
    "SweepReport",
    "truncation_error_sweep",
]
