"""Point-cloud normalization into the unit-sphere object frame."""

import logging

import numpy as np

from src.geometry.models import PointCloud

logger = logging.getLogger(__name__)


def normalize_cloud(cloud: PointCloud) -> PointCloud:
    """
    Center a cloud at its centroid and scale it so the farthest point has norm 1.

    An all-coincident cloud (including a single point) maps to all-zeros.
    Labels are carried over unchanged.

    Args:
        cloud: Input cloud (finiteness is enforced by PointCloud itself)

    Returns:
        Normalized PointCloud
    """
    coords = cloud.coords
    if np.all(coords == coords[0]):
        logger.debug(f"Degenerate cloud of {cloud.n_points} coincident points mapped to origin")
        return PointCloud(coords=np.zeros_like(coords), labels=cloud.labels)

    centered = coords - coords.mean(axis=0)
    scale = float(np.sqrt(np.max(np.sum(centered * centered, axis=1))))
    normalized = centered / scale
    # Re-center to remove the rounding residue of the division
    normalized = normalized - normalized.mean(axis=0)
    return PointCloud(coords=normalized, labels=cloud.labels)
