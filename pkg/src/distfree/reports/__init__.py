"""Text reports, CSV tables and PGM images."""

from distfree.reports.files import (
    format_csv,
    read_csv,
    read_data_csv,
    read_pgm,
    read_vector_csv,
    write_csv,
    write_data_csv,
    write_pgm,
    write_vector_csv,
)
from distfree.reports.generator import ReportGenerator

__all__ = [
    "ReportGenerator",
    "format_csv",
    "write_csv",
    "read_csv",
    "write_vector_csv",
    "read_vector_csv",
    "write_data_csv",
    "read_data_csv",
    "write_pgm",
    "read_pgm",
]
