"""Pydantic models for the geometry module."""

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.common.exceptions import InvalidInputError


class PointCloud(BaseModel):
    """N×3 object coordinates with optional per-point affordance labels in [0, 1]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coords: np.ndarray = Field(..., description="N×3 float64 coordinates")
    labels: Optional[np.ndarray] = Field(
        None,
        description="Optional length-N ground-truth affordance probabilities"
    )

    @field_validator("coords", mode="before")
    @classmethod
    def validate_coords(cls, value) -> np.ndarray:
        """Coerce to a read-only float64 N×3 array with finite entries."""
        coords = np.array(value, dtype=np.float64)
        if coords.ndim != 2 or coords.shape[1] != 3:
            raise InvalidInputError(f"coords must have shape N×3, got {coords.shape}")
        if coords.shape[0] < 1:
            raise InvalidInputError("a point cloud needs at least one point")
        if not np.all(np.isfinite(coords)):
            raise InvalidInputError("point coordinates must be finite")
        coords.setflags(write=False)
        return coords

    @field_validator("labels", mode="before")
    @classmethod
    def validate_labels(cls, value) -> Optional[np.ndarray]:
        """Coerce labels to a read-only float64 vector within [0, 1]."""
        if value is None:
            return None
        labels = np.array(value, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(labels)):
            raise InvalidInputError("labels must be finite")
        if np.any(labels < 0.0) or np.any(labels > 1.0):
            raise InvalidInputError("labels must lie in [0, 1]")
        labels.setflags(write=False)
        return labels

    @model_validator(mode="after")
    def validate_lengths(self):
        """Ensure labels align 1:1 with points."""
        if self.labels is not None and self.labels.shape[0] != self.coords.shape[0]:
            raise InvalidInputError(
                f"labels length ({self.labels.shape[0]}) must equal point count "
                f"({self.coords.shape[0]})"
            )
        return self

    @property
    def n_points(self) -> int:
        """Number of points N."""
        return int(self.coords.shape[0])

    def permuted(self, permutation: np.ndarray) -> "PointCloud":
        """Return a copy whose storage order is coords[permutation]."""
        permutation = np.asarray(permutation)
        labels = None if self.labels is None else self.labels[permutation]
        return PointCloud(coords=self.coords[permutation], labels=labels)


class NeighborList(BaseModel):
    """Neighbor indices and squared distances for one query."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    indices: np.ndarray = Field(..., description="Neighbor point indices (int64)")
    sq_distances: np.ndarray = Field(..., description="Squared Euclidean distances")

    @model_validator(mode="after")
    def validate_alignment(self):
        """Ensure indices and distances align."""
        if self.indices.shape != self.sq_distances.shape:
            raise ValueError("indices and sq_distances must have equal length")
        return self

    def __len__(self) -> int:
        return int(self.indices.shape[0])

    def index_set(self) -> set[int]:
        """Return the neighbor indices as a Python set."""
        return {int(i) for i in self.indices}
