"""Joint covariance assembly and Gaussian conditioning."""

from distfree.posterior.assembly import (
    assemble_C11,
    assemble_C12,
    assemble_C22,
    assemble_joint,
    kernel_gram,
)
from distfree.posterior.conditioning import (
    CholeskySolver,
    PosteriorResult,
    condition,
    reinterrogate,
)
from distfree.posterior.denoising import check_denoising_structure, denoising_structure
from distfree.posterior.export import (
    read_matrix_binary,
    read_matrix_csv,
    write_matrix_binary,
    write_matrix_csv,
)
from distfree.posterior.joint import JointCovariance
from distfree.posterior.oracle import dense_conditional_moments
from distfree.posterior.sampling import sample_gaussian, sample_joint
from distfree.posterior.smw import SMWReport, linear_model_joint, smw_equivalence_check

__all__ = [
    # Blocks
    "JointCovariance",
    "kernel_gram",
    "assemble_C11",
    "assemble_C12",
    "assemble_C22",
    "assemble_joint",
    # Conditioning
    "CholeskySolver",
    "PosteriorResult",
    "condition",
    "reinterrogate",
    # Checks
    "SMWReport",
    "smw_equivalence_check",
    "linear_model_joint",
    "denoising_structure",
    "check_denoising_structure",
    "dense_conditional_moments",
    # Sampling and files
    "sample_joint",
    "sample_gaussian",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_matrix_binary",
    "read_matrix_binary",
]
