"""CSV tables and 16-bit PGM images with a JSON scale sidecar.

CSV: comma separated, '.' decimal point, floats with 17 significant digits,
LF line endings. PGM: binary P5, maxval 65535, big-endian samples, top row
first (largest y); the sidecar records the min/max used for scaling.
"""

import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from distfree.errors import InvalidArgumentError

PGM_MAXVAL = 65535


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def format_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_csv(path: Path | str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.write_text(format_csv(header, rows), encoding="utf-8", newline="\n")
    return path


def read_csv(path: Path | str) -> tuple[list[str], list[list[str]]]:
    """Header and raw string cells of a CSV written by write_csv."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise InvalidArgumentError(f"{path} is empty")
    return lines[0].split(","), [line.split(",") for line in lines[1:] if line]


def write_vector_csv(path: Path | str, values: NDArray[np.float64]) -> Path:
    """One row per component: index,value."""
    return write_csv(path, ("index", "value"), enumerate(np.asarray(values, dtype=np.float64)))


def read_vector_csv(path: Path | str) -> NDArray[np.float64]:
    _, rows = read_csv(path)
    return np.array([float(row[-1]) for row in rows])


def write_data_csv(
    path: Path | str,
    values: NDArray[np.float64],
    detector_count: int,
    angles: Sequence[float],
) -> Path:
    """Acquisition data with rotation, detector and rotation angle per row."""
    values = np.asarray(values, dtype=np.float64)
    if values.size != detector_count * len(angles):
        raise InvalidArgumentError(
            f"{values.size} data values do not fill {len(angles)} rotations of {detector_count} detectors"
        )
    rows = (
        (i // detector_count, i % detector_count, float(angles[i // detector_count]), v)
        for i, v in enumerate(values)
    )
    return write_csv(path, ("rotation", "detector", "angle", "value"), rows)


def read_data_csv(path: Path | str) -> NDArray[np.float64]:
    header, rows = read_csv(path)
    if header != ["rotation", "detector", "angle", "value"]:
        raise InvalidArgumentError(f"{path} is not a data file (header {header})")
    return np.array([float(row[3]) for row in rows])


def image_rows(values: NDArray[np.float64], side_count: int) -> NDArray[np.float64]:
    """Pixel vector (row-major from the bottom) as an image array, top row first."""
    values = np.asarray(values, dtype=np.float64)
    if values.size != side_count * side_count:
        raise InvalidArgumentError(f"{values.size} values do not fill a {side_count}x{side_count} image")
    return values.reshape(side_count, side_count)[::-1]


def write_pgm(path: Path | str, values: NDArray[np.float64], side_count: int) -> Path:
    """Min-max scaled 16-bit PGM plus ``<path>.json`` with the scale.

    Returns:
        Path of the image
    """
    path = Path(path)
    image = image_rows(values, side_count)
    lo, hi = float(image.min()), float(image.max())
    span = hi - lo
    scaled = np.zeros(image.shape) if span == 0.0 else (image - lo) / span
    samples = np.rint(scaled * PGM_MAXVAL).astype(">u2")
    header = f"P5\n{side_count} {side_count}\n{PGM_MAXVAL}\n".encode("ascii")
    path.write_bytes(header + samples.tobytes())
    sidecar = {"width": side_count, "height": side_count, "maxval": PGM_MAXVAL, "min": lo, "max": hi}
    pgm_sidecar(path).write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    return path


def pgm_sidecar(path: Path | str) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def read_pgm(path: Path | str) -> tuple[NDArray[np.uint16], dict[str, Any] | None]:
    """Raw samples (top row first) and the sidecar, if present."""
    raw = Path(path).read_bytes()
    parts = raw.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P5":
        raise InvalidArgumentError(f"{path} is not a binary PGM file")
    width, height = (int(v) for v in parts[1].split())
    samples = np.frombuffer(parts[3], dtype=">u2").reshape(height, width).astype(np.uint16)
    sidecar_path = pgm_sidecar(path)
    sidecar = json.loads(sidecar_path.read_text(encoding="utf-8")) if sidecar_path.exists() else None
    return samples, sidecar
