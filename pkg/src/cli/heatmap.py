"""ASCII PLY heatmaps: affordance probabilities and spatial weights as vertex colors."""

import logging
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np
from plyfile import PlyData, PlyElement

from src.common.exceptions import ShapeError

logger = logging.getLogger(__name__)

# Green/blue share of the cold end of the ramp
COLD_LEVEL = 0.8


def heatmap_colors(values: np.ndarray) -> np.ndarray:
    """
    N×3 uint8 colors: red = round(255·v), green = blue = round(255·(1 − v)·0.8).

    Rounding is half-to-even.
    """
    values = np.clip(np.asarray(values, dtype=np.float64).reshape(-1), 0.0, 1.0)
    red = np.rint(255.0 * values)
    cold = np.rint(255.0 * (1.0 - values) * COLD_LEVEL)
    return np.column_stack([red, cold, cold]).astype(np.uint8)


def write_heatmap_ply(
    path: Union[str, Path],
    coords: np.ndarray,
    values: np.ndarray,
    comments: Sequence[str] = (),
    value_name: str = "probability",
) -> Path:
    """
    Write an ASCII PLY with one colored vertex per point and the raw value as a property.

    Args:
        path: Destination file
        coords: N×3 coordinates
        values: Length-N values in [0, 1]
        comments: Header comment lines (config hash, affordance, ...)
        value_name: Name of the scalar vertex property
    """
    coords = np.asarray(coords, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64).reshape(-1)
    if coords.shape != (values.shape[0], 3):
        raise ShapeError(f"coords {coords.shape} do not match {values.shape[0]} values")

    colors = heatmap_colors(values)
    vertices = np.empty(
        values.shape[0],
        dtype=[("x", "f8"), ("y", "f8"), ("z", "f8"), ("red", "u1"), ("green", "u1"), ("blue", "u1"), (value_name, "f8")],
    )
    vertices["x"], vertices["y"], vertices["z"] = coords[:, 0], coords[:, 1], coords[:, 2]
    vertices["red"], vertices["green"], vertices["blue"] = colors[:, 0], colors[:, 1], colors[:, 2]
    vertices[value_name] = values

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    PlyData([PlyElement.describe(vertices, "vertex")], text=True, comments=list(comments)).write(str(path))
    logger.info(f"Wrote {values.shape[0]}-vertex heatmap to {path}")
    return path


def read_heatmap_ply(path: Union[str, Path], value_name: str = "probability") -> Tuple[np.ndarray, np.ndarray, np.ndarray, list]:
    """Re-read a heatmap: (coords, colors, values, header comments)."""
    ply = PlyData.read(str(path))
    vertex = ply["vertex"]
    coords = np.column_stack([vertex["x"], vertex["y"], vertex["z"]]).astype(np.float64)
    colors = np.column_stack([vertex["red"], vertex["green"], vertex["blue"]])
    return coords, colors, np.asarray(vertex[value_name], dtype=np.float64), list(ply.comments)
