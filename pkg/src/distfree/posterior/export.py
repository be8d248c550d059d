"""Matrix files: CSV with 17 significant digits and the framed DFBM binary.

DFBM layout: b"DFBM", uint32 rows, uint32 cols (little-endian), then
rows * cols little-endian float64 values in row-major order.
"""

from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from distfree.errors import InvalidArgumentError

MAGIC = b"DFBM"
_HEADER_BYTES = len(MAGIC) + 8


def write_matrix_csv(path: Path | str, matrix: NDArray[np.float64]) -> Path:
    path = Path(path)
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    np.savetxt(path, matrix, fmt="%.17g", delimiter=",", newline="\n")
    return path


def read_matrix_csv(path: Path | str) -> NDArray[np.float64]:
    return np.loadtxt(Path(path), delimiter=",", ndmin=2, dtype=np.float64)


def write_matrix_binary(path: Path | str, matrix: NDArray[np.float64]) -> Path:
    path = Path(path)
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    rows, cols = matrix.shape
    header = MAGIC + np.array([rows, cols], dtype="<u4").tobytes()
    path.write_bytes(header + np.ascontiguousarray(matrix, dtype="<f8").tobytes())
    return path


def read_matrix_binary(path: Path | str) -> NDArray[np.float64]:
    """Read a DFBM file.

    Raises:
        InvalidArgumentError: If the magic or the payload size is wrong
    """
    raw = Path(path).read_bytes()
    if raw[: len(MAGIC)] != MAGIC:
        raise InvalidArgumentError(f"{path} is not a DFBM matrix file")
    if len(raw) < _HEADER_BYTES:
        raise InvalidArgumentError(f"{path} has a truncated header")
    rows, cols = (int(v) for v in np.frombuffer(raw[len(MAGIC) : _HEADER_BYTES], dtype="<u4"))
    payload = raw[_HEADER_BYTES:]
    if len(payload) != 8 * rows * cols:
        raise InvalidArgumentError(
            f"{path} declares {rows}x{cols} values but holds {len(payload) // 8}"
        )
    return np.frombuffer(payload, dtype="<f8").reshape(rows, cols).astype(np.float64)
