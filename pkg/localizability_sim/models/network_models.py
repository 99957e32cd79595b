"""
Pydantic models for network documents and experiment configuration.
"""

import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .. import config


class Position(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float = Field(..., description="Easting in meters.")
    y: float = Field(..., description="Northing in meters.")

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)


class NodeRecord(BaseModel):
    id: int = Field(..., ge=0, description="Dense node id, 0..S-1.")
    x: float = Field(..., description="Ground-truth x coordinate in meters.")
    y: float = Field(..., description="Ground-truth y coordinate in meters.")
    beacon: bool = Field(False, description="True when the location is known a priori.")
    label: Optional[str] = Field(
        None, description="Human-readable name used by scenario fixtures."
    )


class HoleShape(str, Enum):
    DISC = "disc"
    RECT = "rect"


class HoleSpec(BaseModel):
    """An empty area carved out of the deployment square."""

    shape: HoleShape = Field(..., description="Disc or axis-aligned rectangle.")
    center_x: Optional[float] = Field(None, description="Disc center x.")
    center_y: Optional[float] = Field(None, description="Disc center y.")
    radius: Optional[float] = Field(None, gt=0, description="Disc radius in meters.")
    x0: Optional[float] = Field(None, description="Rectangle lower-left x.")
    y0: Optional[float] = Field(None, description="Rectangle lower-left y.")
    x1: Optional[float] = Field(None, description="Rectangle upper-right x.")
    y1: Optional[float] = Field(None, description="Rectangle upper-right y.")

    @model_validator(mode="after")
    def _check_geometry(self) -> "HoleSpec":
        if self.shape == HoleShape.DISC:
            if None in (self.center_x, self.center_y, self.radius):
                raise ValueError("A disc hole needs center_x, center_y and radius.")
        else:
            if None in (self.x0, self.y0, self.x1, self.y1):
                raise ValueError("A rectangular hole needs x0, y0, x1 and y1.")
            if self.x1 <= self.x0 or self.y1 <= self.y0:
                raise ValueError("Rectangle corners must satisfy x0 < x1 and y0 < y1.")
        return self

    @classmethod
    def disc(cls, center_x: float, center_y: float, radius: float) -> "HoleSpec":
        return cls(shape=HoleShape.DISC, center_x=center_x, center_y=center_y, radius=radius)

    @classmethod
    def rect(cls, x0: float, y0: float, x1: float, y1: float) -> "HoleSpec":
        return cls(shape=HoleShape.RECT, x0=x0, y0=y0, x1=x1, y1=y1)

    def contains(self, x: float, y: float) -> bool:
        if self.shape == HoleShape.DISC:
            return math.hypot(x - self.center_x, y - self.center_y) < self.radius
        return self.x0 < x < self.x1 and self.y0 < y < self.y1

    def covers_square(self, side: float) -> bool:
        """True when the hole leaves no open area of the [0, side]^2 square."""
        if self.shape == HoleShape.DISC:
            corners = ((0.0, 0.0), (side, 0.0), (0.0, side), (side, side))
            return all(math.hypot(x - self.center_x, y - self.center_y) <= self.radius for x, y in corners)
        return self.x0 <= 0 and self.y0 <= 0 and self.x1 >= side and self.y1 >= side

    def bounds(self) -> Tuple[float, float, float, float]:
        if self.shape == HoleShape.DISC:
            return (
                self.center_x - self.radius,
                self.center_y - self.radius,
                self.center_x + self.radius,
                self.center_y + self.radius,
            )
        return (self.x0, self.y0, self.x1, self.y1)


class NetworkDocument(BaseModel):
    """On-disk network format. Edges are derived on load, never stored."""

    radius: float = Field(..., gt=0, description="Radio range in meters.")
    extent: Optional[float] = Field(
        None, gt=0, description="Side of the deployment square, when known."
    )
    hole: Optional[HoleSpec] = Field(None, description="Carved-out region, if any.")
    nodes: List[NodeRecord] = Field(..., description="Every node of the network.")


class BeaconMode(str, Enum):
    RANDOM = "random"
    SKEWED = "skewed"
    EXPLICIT = "explicit"


class Placement(str, Enum):
    CELLS = "cells"
    UNIFORM = "uniform"


class ExperimentConfig(BaseModel):
    """Parameters of one generated network."""

    S: Optional[int] = Field(
        None, ge=3, description="Node count; defaults to grid squared."
    )
    grid: int = Field(config.GRID_CELLS, ge=1, description="Cells per side.")
    D0: float = Field(config.D0_METERS, gt=0, description="Unit of distance in meters.")
    N: float = Field(config.DEFAULT_DENSITY_N, gt=0, description="Network-density factor.")
    B: float = Field(
        config.DEFAULT_BEACON_DENSITY, gt=0, le=1, description="Beacon density."
    )
    radius_factor: float = Field(
        config.RADIUS_FACTOR, gt=0, description="Radio radius in units of D0."
    )
    placement: Placement = Field(Placement.CELLS, description="Cell grid or uniform.")
    beacon_mode: BeaconMode = Field(BeaconMode.RANDOM, description="Beacon selection.")
    beacon_ids: Optional[List[int]] = Field(
        None, description="Explicit beacon ids for the explicit mode."
    )
    corner_fraction: float = Field(
        config.SKEW_CORNER_FRACTION,
        ge=0,
        le=1,
        description="Share of beacons placed in the skewed corner region.",
    )
    corners: int = Field(1, ge=1, le=2, description="Number of skewed corners.")
    hole: Optional[HoleSpec] = Field(None, description="Optional hole region.")
    seed: int = Field(0, ge=0, lt=2**64, description="Seed of every random draw.")

    @model_validator(mode="after")
    def _check_counts(self) -> "ExperimentConfig":
        if self.S is None:
            self.S = self.grid * self.grid
        if self.placement == Placement.CELLS and self.hole is None:
            if self.S != self.grid * self.grid:
                raise ValueError("Cell placement puts exactly one node in each cell.")
        if self.beacon_mode == BeaconMode.EXPLICIT and not self.beacon_ids:
            raise ValueError("Explicit beacon mode needs beacon_ids.")
        return self

    @property
    def uses_cells(self) -> bool:
        return self.placement == Placement.CELLS and self.hole is None

    @property
    def cell_size(self) -> float:
        return self.D0 * self.N

    @property
    def side(self) -> float:
        if self.uses_cells:
            return self.grid * self.cell_size
        return math.sqrt(self.S) * self.cell_size

    @property
    def radius(self) -> float:
        return self.radius_factor * self.D0

    @property
    def beacon_count(self) -> int:
        if self.beacon_mode == BeaconMode.EXPLICIT:
            return len(self.beacon_ids)
        return int(round(self.B * self.S))
