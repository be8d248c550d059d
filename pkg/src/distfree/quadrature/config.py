"""Quadrature node counts used throughout assembly."""

from pydantic import BaseModel, ConfigDict, Field

from distfree.quadrature.rules import MAX_ORDER


class QuadratureConfig(BaseModel):
    """Per-domain node counts.

    Defaults give 16 radial x 8 angular nodes per cone and 8 nodes per pixel
    axis; the forward data use a finer ray rule.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    interval_order: int = Field(12, ge=1, le=MAX_ORDER, description="General 1-D interval rule")
    pixel_order: int = Field(8, ge=1, le=MAX_ORDER, description="Nodes per pixel axis")
    cone_radial: int = Field(16, ge=1, le=MAX_ORDER, description="Radial nodes per cone")
    cone_angular: int = Field(8, ge=1, le=MAX_ORDER, description="Angular nodes per cone")
    line_order: int = Field(32, ge=1, le=MAX_ORDER, description="Nodes along a central line")
    detector_order: int = Field(16, ge=1, le=MAX_ORDER, description="Nodes per detector interval")
    data_angular: int = Field(16, ge=1, le=MAX_ORDER, description="Angular nodes for ray data")
    data_radial: int = Field(64, ge=1, le=MAX_ORDER, description="Nodes along each ray for data")
