"""Farthest point sampling on a canonical (sorted-coordinate) point order."""

import logging
from typing import List

import numpy as np

from src.common.exceptions import ParameterError
from src.geometry.models import PointCloud

logger = logging.getLogger(__name__)


def canonical_order(coords: np.ndarray) -> np.ndarray:
    """
    Permutation sorting points lexicographically by (x, y, z).

    Exact duplicate coordinates are indistinguishable to sampling, so they
    keep storage order (lexsort is stable). The sorted coordinate array is
    therefore identical for every storage order of the same cloud, and so
    are the coordinates of any points picked from it; only the index
    returned for a duplicated point may name a different copy.
    """
    return np.lexsort((coords[:, 2], coords[:, 1], coords[:, 0]))


def farthest_point_sample(cloud: PointCloud, M: int, seed: int) -> List[int]:
    """
    Greedy max-min sampling of M point indices.

    The first pick is a seeded uniform draw; every later pick maximizes the
    minimum distance to the already-chosen set. Sampling runs on the
    canonical coordinate order, so the chosen points do not depend on the
    storage order of the cloud. Ties go to the earlier canonical position.

    Args:
        cloud: Point cloud
        M: Number of samples, 1 ≤ M ≤ N
        seed: Seed of the first draw

    Returns:
        List of M indices into cloud.coords

    Raises:
        ParameterError: If M is outside [1, N]
    """
    n = cloud.n_points
    if M < 1 or M > n:
        raise ParameterError(f"sample count must be in [1, {n}], got {M}")

    order = canonical_order(cloud.coords)
    coords = cloud.coords[order]
    rng = np.random.default_rng(seed)

    chosen = np.zeros(M, dtype=np.int64)
    min_sq = np.full(n, np.inf)
    current = int(rng.integers(n))
    for step in range(M):
        chosen[step] = current
        diff = coords - coords[current]
        min_sq = np.minimum(min_sq, np.sum(diff * diff, axis=1))
        min_sq[chosen[: step + 1]] = -1.0
        current = int(np.argmax(min_sq))

    return [int(i) for i in order[chosen]]
