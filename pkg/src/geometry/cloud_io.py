"""Reader and writer for the "#afford3d-pc v1" point-cloud text format.

One point per line, "x y z [label]", whitespace-separated. Values are
written with repr() so a save/load cycle is lossless.
"""

import logging
import math
import re
from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from src.common.exceptions import FormatError, MissingReferenceError
from src.geometry.models import PointCloud

logger = logging.getLogger(__name__)

HEADER_PATTERN = re.compile(r"^#afford3d-pc v1 N=(\d+)$")


def format_cloud(cloud: PointCloud) -> str:
    """Serialize a cloud to the text format."""
    lines = [f"#afford3d-pc v1 N={cloud.n_points}"]
    for i in range(cloud.n_points):
        fields = [repr(float(v)) for v in cloud.coords[i]]
        if cloud.labels is not None:
            fields.append(repr(float(cloud.labels[i])))
        lines.append(" ".join(fields))
    return "\n".join(lines) + "\n"


def save_cloud(path: Union[str, Path], cloud: PointCloud) -> Path:
    """
    Write a cloud to disk.

    Args:
        path: Destination file
        cloud: Point cloud to save

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_cloud(cloud))
    logger.debug(f"Wrote {cloud.n_points} points to {path}")
    return path


def _parse_real(token: str, source: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise FormatError(f"{source}:{line_no}: not a number: {token!r}")
    if not math.isfinite(value):
        raise FormatError(f"{source}:{line_no}: non-finite value {token!r}")
    return value


def parse_cloud(text: str, source: str = "<string>") -> PointCloud:
    """
    Parse the text format.

    Raises:
        FormatError: On a bad header, wrong field count, mixed labeled/unlabeled
            lines, NaN/Inf values, or a point count that disagrees with N
    """
    lines = text.splitlines()
    if not lines:
        raise FormatError(f"{source}: empty point-cloud file")
    match = HEADER_PATTERN.match(lines[0].strip())
    if match is None:
        raise FormatError(f"{source}:1: expected header '#afford3d-pc v1 N=<count>'")
    declared = int(match.group(1))

    coords: List[List[float]] = []
    labels: List[float] = []
    width: Optional[int] = None
    for line_no, raw in enumerate(lines[1:], start=2):
        stripped = raw.strip()
        if not stripped:
            continue
        tokens = stripped.split()
        if len(tokens) not in (3, 4):
            raise FormatError(f"{source}:{line_no}: expected 'x y z [label]', got {len(tokens)} fields")
        if width is None:
            width = len(tokens)
        elif width != len(tokens):
            raise FormatError(f"{source}:{line_no}: label present on some lines but not others")
        values = [_parse_real(t, source, line_no) for t in tokens]
        coords.append(values[:3])
        if width == 4:
            labels.append(values[3])

    if len(coords) != declared:
        raise FormatError(f"{source}: header declares N={declared} but file has {len(coords)} points")
    if declared < 1:
        raise FormatError(f"{source}: a point cloud needs at least one point")

    return PointCloud(
        coords=np.array(coords, dtype=np.float64),
        labels=np.array(labels, dtype=np.float64) if width == 4 else None,
    )


def load_cloud(path: Union[str, Path]) -> PointCloud:
    """
    Read a cloud from disk.

    Raises:
        MissingReferenceError: If the file does not exist
        FormatError: If the file does not follow the format
    """
    path = Path(path)
    if not path.is_file():
        raise MissingReferenceError(f"point-cloud file not found: {path}")
    cloud = parse_cloud(path.read_text(), source=str(path))
    logger.debug(f"Loaded {cloud.n_points} points from {path}")
    return cloud
