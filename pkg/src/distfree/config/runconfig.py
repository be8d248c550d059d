"""Reproducible run description read from a sectioned key = value file.

    # comment
    [geometry]
    rotation_count = 24
    [phantom]
    blob_1 = [0.40, 0.55, 0.15, 1.0]

Scalars are bare, lists use brackets. Every parse or validation problem is
reported as a ConfigError carrying the line of the offending key (or of the
section header when the problem spans the section).
"""

import logging
import re
from pathlib import Path
from typing import Any, Self

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from distfree.errors import ConfigError, InvalidArgumentError
from distfree.geometry import FanBeamGeometry, uniform_rotations
from distfree.kernels import CovarianceKernel, KernelFamily, NoiseKind, NoiseModel
from distfree.measurement import AssemblyMode, PixelGrid
from distfree.phantom import Blob, Phantom, calibrate_white_noise
from distfree.quadrature import QuadratureConfig

logger = logging.getLogger(__name__)

SECTIONS = ("geometry", "kernel", "noise", "quadrature", "grid", "phantom", "run")

# Noise std as a fraction of the peak clean datum when no level is given
DEFAULT_RELATIVE_NOISE = 0.01

_INT = re.compile(r"^[+-]?\d+$")
_BLOB_KEY = re.compile(r"^blob_(\d+)$")
_NOISE_KERNEL_KEYS = ("kernel_family", "kernel_variance", "kernel_length_scale")


class NoiseSection(BaseModel):
    """Noise settings; a relative level is resolved against the clean data."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: NoiseKind = NoiseKind.WHITE
    white_level: float | None = Field(None, ge=0, description="Absolute sigma_e^2")
    relative_level: float | None = Field(None, ge=0, description="Noise std / peak clean datum")
    kernel_family: KernelFamily = KernelFamily.SQUARED_EXPONENTIAL
    kernel_variance: float = Field(1e-4, ge=0)
    kernel_length_scale: float = Field(0.01, gt=0)

    @model_validator(mode="after")
    def check_levels(self) -> Self:
        if self.white_level is not None and self.relative_level is not None:
            raise ValueError("give either white_level or relative_level, not both")
        return self

    def resolve(
        self, clean: NDArray[np.float64], geometry: FanBeamGeometry, quad: QuadratureConfig
    ) -> NoiseModel:
        """Concrete noise model for this run."""
        if self.kind is NoiseKind.KERNEL:
            return NoiseModel(
                kind=NoiseKind.KERNEL,
                kernel=CovarianceKernel(
                    family=self.kernel_family,
                    variance=self.kernel_variance,
                    length_scale=self.kernel_length_scale,
                    dimension=1,
                ),
            )
        if self.white_level is not None:
            return NoiseModel.white(self.white_level)
        relative = DEFAULT_RELATIVE_NOISE if self.relative_level is None else self.relative_level
        return calibrate_white_noise(clean, relative, geometry, quad)


class GridSection(BaseModel):
    """Pixel interrogation grid."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    side_count: int = Field(32, ge=1)
    fill: float = Field(0.95, gt=0, le=1)


class RunSection(BaseModel):
    """What to run and where to write."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mode: AssemblyMode = AssemblyMode.POINT_LINE
    seed: int = Field(0, ge=0, lt=2**64)
    output_dir: str = "out"
    truncation_levels: tuple[int, ...] = (0, 1, 2, 4)
    reinterrogate_sizes: tuple[int, ...] = ()
    compare_grid_size: int = Field(8, ge=1)


class RunConfig(BaseModel):
    """Complete, validated run configuration."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    geometry: FanBeamGeometry = Field(
        default_factory=lambda: FanBeamGeometry.with_uniform_rotations(24, detector_count=48)
    )
    kernel: CovarianceKernel = Field(default_factory=CovarianceKernel)
    noise: NoiseSection = Field(default_factory=NoiseSection)
    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    grid: GridSection = Field(default_factory=GridSection)
    phantom: Phantom = Field(default_factory=Phantom.default)
    run: RunSection = Field(default_factory=RunSection)

    @model_validator(mode="after")
    def check_phantom_disc(self) -> Self:
        if (
            self.phantom.disc_center != self.geometry.object_center
            or self.phantom.disc_radius != self.geometry.object_radius
        ):
            raise ValueError("phantom disc must match the geometry's object disc")
        return self

    def pixel_grid(self, side_count: int | None = None) -> PixelGrid:
        return PixelGrid(side_count=side_count or self.grid.side_count, extent=self.geometry.window)

    def noise_model(self, clean: NDArray[np.float64]) -> NoiseModel:
        return self.noise.resolve(clean, self.geometry, self.quadrature)

    def with_overrides(
        self,
        seed: int | None = None,
        mode: AssemblyMode | None = None,
        output_dir: str | None = None,
    ) -> "RunConfig":
        """Copy with command-line overrides applied to the run section."""
        update: dict[str, Any] = {}
        if seed is not None:
            update["seed"] = seed
        if mode is not None:
            update["mode"] = AssemblyMode(mode)
        if output_dir is not None:
            update["output_dir"] = str(output_dir)
        if not update:
            return self
        try:
            run = RunSection.model_validate(self.run.model_dump() | update)
        except ValidationError as e:
            error = e.errors()[0]
            where = _describe(("run", *error["loc"]))
            raise ConfigError(f"override {where}: {error['msg']}") from e
        return self.model_copy(update={"run": run})

    @classmethod
    def from_file(cls, path: Path | str) -> "RunConfig":
        """Read and validate a configuration file.

        Raises:
            ConfigError: If the file is missing, unreadable or invalid
        """
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ConfigError(f"cannot read config file {path}: {e.strerror or e}") from e
        config = cls.from_text(text)
        logger.info(f"Loaded run config from {path}")
        return config

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        """Parse configuration text.

        Raises:
            ConfigError: With the line number of the first problem
        """
        sections, lines = _parse_sections(text)
        data = _to_model_data(sections, lines)
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            error = e.errors()[0]
            loc = tuple(error["loc"])
            raise ConfigError(f"{_describe(loc)}: {error['msg']}", _line_for(loc, lines)) from e

    def to_text(self) -> str:
        """Serialize; from_text(to_text()) reproduces this config."""
        out: list[str] = []
        g = self.geometry
        out.append("[geometry]")
        for key in (
            "source_distance", "screen_radius", "half_opening", "detector_count",
            "detector_fill", "detector_peak", "window", "object_center", "object_radius",
        ):
            out.append(f"{key} = {_format(getattr(g, key))}")
        if g.rotation_angles == uniform_rotations(g.rotation_count):
            out.append(f"rotation_count = {g.rotation_count}")
        else:
            out.append(f"rotation_angles = {_format(g.rotation_angles)}")

        out.append("")
        out.append("[kernel]")
        for key in ("family", "variance", "length_scale"):
            out.append(f"{key} = {_format(getattr(self.kernel, key))}")

        out.append("")
        out.append("[noise]")
        out.append(f"kind = {_format(self.noise.kind)}")
        for key in ("white_level", "relative_level"):
            value = getattr(self.noise, key)
            if value is not None:
                out.append(f"{key} = {_format(value)}")
        if self.noise.kind is NoiseKind.KERNEL:
            for key in _NOISE_KERNEL_KEYS:
                out.append(f"{key} = {_format(getattr(self.noise, key))}")

        for name in ("quadrature", "grid", "run"):
            out.append("")
            out.append(f"[{name}]")
            for key, value in getattr(self, name).model_dump().items():
                out.append(f"{key} = {_format(value)}")

        out.append("")
        out.append("[phantom]")
        for i, blob in enumerate(self.phantom.blobs, start=1):
            out.append(f"blob_{i} = {_format(blob.to_list())}")
        return "\n".join(out) + "\n"


def _format(value: Any) -> str:
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format(v) for v in value) + "]"
    if hasattr(value, "value"):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_scalar(text: str, line: int) -> Any:
    if not text:
        raise ConfigError("missing value", line)
    if _INT.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text.strip("\"'")


def _parse_value(text: str, line: int) -> Any:
    if text.startswith("["):
        if not text.endswith("]"):
            raise ConfigError("unterminated list", line)
        inner = text[1:-1].strip()
        if not inner:
            return []
        return [_parse_scalar(part.strip(), line) for part in inner.split(",")]
    if text.endswith("]"):
        raise ConfigError("unbalanced ']'", line)
    return _parse_scalar(text, line)


def _parse_sections(text: str) -> tuple[dict[str, dict[str, Any]], dict[Any, Any]]:
    """Raw values per section and the line of every section and key.

    ``lines`` maps section -> line of its header and (section, key) -> line.
    """
    sections: dict[str, dict[str, Any]] = {}
    lines: dict[Any, Any] = {}
    current: str | None = None
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]") and "=" not in stripped:
            name = stripped[1:-1].strip()
            if name not in SECTIONS:
                raise ConfigError(f"unknown section [{name}]", number)
            if name in sections:
                raise ConfigError(f"duplicate section [{name}]", number)
            sections[name] = {}
            lines[name] = number
            current = name
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}", number)
        if current is None:
            raise ConfigError("key outside of any section", number)
        key, value = (part.strip() for part in stripped.split("=", 1))
        if not key:
            raise ConfigError("missing key", number)
        if key in sections[current]:
            raise ConfigError(f"duplicate key {key!r} in [{current}]", number)
        sections[current][key] = _parse_value(value, number)
        lines[(current, key)] = number
    return sections, lines


def _to_model_data(sections: dict[str, dict[str, Any]], lines: dict[Any, Any]) -> dict[str, Any]:
    """Reshape raw sections into the nested RunConfig input."""
    data: dict[str, Any] = {name: dict(values) for name, values in sections.items() if name != "phantom"}

    geometry = data.setdefault("geometry", {})
    if "rotation_count" in geometry:
        count = geometry.pop("rotation_count")
        if "rotation_angles" in geometry:
            raise ConfigError(
                "give either rotation_count or rotation_angles", lines[("geometry", "rotation_count")]
            )
        try:
            geometry["rotation_angles"] = uniform_rotations(int(count))
        except (InvalidArgumentError, TypeError, ValueError) as e:
            raise ConfigError(f"invalid rotation_count: {e}", lines[("geometry", "rotation_count")]) from e
    elif "rotation_angles" not in geometry:
        geometry["rotation_angles"] = uniform_rotations(24)
    geometry.setdefault("detector_count", 48)

    noise = data.get("noise", {})
    if noise.get("kind", NoiseKind.WHITE.value) == NoiseKind.WHITE.value:
        for key in _NOISE_KERNEL_KEYS:
            if key in noise:
                logger.warning(f"Ignoring [noise] {key} for white noise (line {lines[('noise', key)]})")
                noise.pop(key)

    phantom_raw = sections.get("phantom")
    phantom: dict[str, Any] = {
        "disc_center": geometry.get("object_center", (0.5, 0.5)),
        "disc_radius": geometry.get("object_radius", 0.45),
    }
    if phantom_raw is None:
        phantom["blobs"] = [b.model_dump() for b in Phantom.default().blobs]
    else:
        blobs = []
        for key, value in phantom_raw.items():
            line = lines[("phantom", key)]
            match = _BLOB_KEY.match(key)
            if match is None:
                raise ConfigError(f"unknown [phantom] key {key!r} (expected blob_<i>)", line)
            if not isinstance(value, list) or len(value) != 4:
                raise ConfigError(f"{key} must be [center_x, center_y, radius, amplitude]", line)
            blobs.append((int(match.group(1)), key, value))
        blobs.sort()
        phantom["blobs"] = [
            {"center": (v[0], v[1]), "radius": v[2], "amplitude": v[3]} for _, _, v in blobs
        ]
        lines["phantom_blob_keys"] = [key for _, key, _ in blobs]
    data["phantom"] = phantom
    return data


def _describe(loc: tuple) -> str:
    if not loc:
        return "config"
    if len(loc) == 1:
        return f"[{loc[0]}]"
    return f"[{loc[0]}] {'.'.join(str(part) for part in loc[1:])}"


def _line_for(loc: tuple, lines: dict[Any, Any]) -> int | None:
    if not loc:
        return None
    section = loc[0]
    if section == "phantom" and len(loc) >= 3 and loc[1] == "blobs":
        keys = lines.get("phantom_blob_keys", [])
        if isinstance(loc[2], int) and loc[2] < len(keys):
            return lines.get(("phantom", keys[loc[2]]))
        return lines.get("phantom")
    if len(loc) >= 2:
        key = loc[1]
        if section == "geometry" and key == "rotation_angles":
            return lines.get(("geometry", "rotation_angles"), lines.get(("geometry", "rotation_count")))
        if (section, key) in lines:
            return lines[(section, key)]
    return lines.get(section)
