"""Deterministic stand-ins for the frozen point, video and action encoders.

The point stub is trainable (a shared 2-layer patch MLP); the video and
action stubs either read stored embeddings or synthesize seeded ones.
"""

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from src.autodiff import ops
from src.autodiff.checkpoint import load_tensors, save_tensors
from src.autodiff.tensor import Tensor
from src.common.exceptions import FormatError, ParameterError
from src.geometry.models import PointCloud
from src.geometry.normalization import normalize_cloud
from src.geometry.sampling import canonical_order, farthest_point_sample
from src.geometry.spatial_index import SpatialIndex, knn
from src.model.models import (
    SUPPORTED_FRAMES,
    ActionTokens,
    EmbeddingSource,
    ParamsLike,
    TokenFeatures,
    VideoTokens,
    as_tensors,
)

logger = logging.getLogger(__name__)

# Spread of per-video noise around the affordance prototype
SYNTHETIC_NOISE = 0.3


def stable_seed(*parts) -> int:
    """A process-independent 63-bit seed derived from the given parts."""
    digest = hashlib.sha256("\x1f".join(str(p) for p in parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") >> 1


@dataclass(frozen=True)
class PatchGeometry:
    """Parameter-free part of the point stub: centers and flattened local patches."""

    center_indices: list[int]
    centers: np.ndarray
    patches: np.ndarray  # M × (3k + 3): center-relative neighbors by (distance, index), then the center


def build_patches(cloud: PointCloud, M: int, k_patch: int, seed: int) -> PatchGeometry:
    """
    FPS-select M centers of a normalized cloud and gather their k-NN patches.

    Each patch row is the flattened center-relative neighborhood followed by
    the center itself, which gives the patch MLP a positional cue.

    Raises:
        ParameterError: If M or k_patch is outside [1, N]
    """
    n = cloud.n_points
    if M < 1 or M > n:
        raise ParameterError(f"token count must be in [1, {n}], got {M}")
    if k_patch < 1 or k_patch > n:
        raise ParameterError(f"patch size must be in [1, {n}], got {k_patch}")

    center_indices = farthest_point_sample(cloud, M, seed)
    # Index the canonical order so distance ties resolve independently of storage order
    canonical = cloud.coords[canonical_order(cloud.coords)]
    index = SpatialIndex(canonical)
    centers = cloud.coords[center_indices]
    patches = np.empty((M, 3 * k_patch + 3))
    for row, center in enumerate(centers):
        neighbors = knn(index, center, k_patch)
        patches[row, :-3] = (canonical[neighbors.indices] - center).reshape(-1)
        patches[row, -3:] = center
    return PatchGeometry(center_indices=center_indices, centers=centers, patches=patches)


def embed_patches(geometry: PatchGeometry, params: ParamsLike) -> TokenFeatures:
    """Run the shared patch MLP over precomputed patches."""
    p = as_tensors(params)
    patches = Tensor(geometry.patches)
    hidden = ops.relu(ops.add_bias(ops.matmul(patches, p["patch.w1"]), p["patch.b1"]))
    features = ops.add_bias(ops.matmul(hidden, p["patch.w2"]), p["patch.b2"])
    return TokenFeatures(
        features=features,
        centers=geometry.centers,
        center_indices=geometry.center_indices,
    )


def encode_points_stub(
    cloud: PointCloud,
    params: ParamsLike,
    M: int,
    k_patch: int,
    seed: int,
) -> TokenFeatures:
    """
    Encode a cloud into M patch tokens.

    The cloud is normalized first, so rigid translations of the input do
    not change the tokens.

    Args:
        cloud: Input cloud
        params: Model parameters (uses patch.*)
        M: Token count
        k_patch: Points per patch
        seed: FPS seed

    Returns:
        TokenFeatures with M×D features
    """
    normalized = normalize_cloud(cloud)
    geometry = build_patches(normalized, M, k_patch, seed)
    return embed_patches(geometry, params)


def _check_frames(F: int) -> None:
    if F not in SUPPORTED_FRAMES:
        raise ParameterError(f"frame count must be one of {SUPPORTED_FRAMES}, got {F}")


def _resolve(path: str, base_dir: Optional[Path]) -> Path:
    candidate = Path(path)
    if not candidate.is_absolute() and base_dir is not None:
        candidate = base_dir / candidate
    return candidate


def encode_video_stub(
    source: Union[EmbeddingSource, str],
    F: int,
    width: int,
    video_id: str = "",
    affordance: str = "",
    base_dir: Optional[Path] = None,
) -> VideoTokens:
    """
    Video embeddings for one sample.

    File mode reads tensor "video" (F×D_v) from an A3DW file. Synthetic mode
    draws an affordance prototype plus per-video noise seeded from
    (seed, video_id, affordance, F).

    Raises:
        ParameterError: Unsupported F
        FormatError: Stored tensor missing or mis-shaped
    """
    _check_frames(F)
    if isinstance(source, str):
        source = EmbeddingSource.parse(source)

    if source.kind == "file":
        path = _resolve(source.path, base_dir)
        tensors = load_tensors(path)
        if "video" not in tensors:
            raise FormatError(f"{path}: no 'video' tensor")
        values = tensors["video"]
        if values.shape != (F, width):
            raise FormatError(f"{path}: video tensor has shape {values.shape}, expected {(F, width)}")
        return VideoTokens(values=values)

    prototype = np.random.default_rng(stable_seed("video-prototype", affordance)).normal(size=width)
    rng = np.random.default_rng(stable_seed("video", source.seed, video_id, affordance, F))
    values = prototype[None, :] + SYNTHETIC_NOISE * rng.normal(size=(F, width))
    return VideoTokens(values=values)


def encode_action_stub(
    source: Union[EmbeddingSource, str],
    F: int,
    width: int,
    video_id: str = "",
    affordance: str = "",
    base_dir: Optional[Path] = None,
) -> ActionTokens:
    """
    Latent action tokens (F×2×D_a) for one sample; same contract as the video stub.

    Raises:
        ParameterError: Unsupported F
        FormatError: Stored tensor missing, middle extent ≠ 2, or other mismatch
    """
    _check_frames(F)
    if isinstance(source, str):
        source = EmbeddingSource.parse(source)

    if source.kind == "file":
        path = _resolve(source.path, base_dir)
        tensors = load_tensors(path)
        if "action" not in tensors:
            raise FormatError(f"{path}: no 'action' tensor")
        values = tensors["action"]
        if values.ndim != 3 or values.shape[1] != 2:
            raise FormatError(f"{path}: action tensor must be F×2×D_a, got {values.shape}")
        if values.shape != (F, 2, width):
            raise FormatError(f"{path}: action tensor has shape {values.shape}, expected {(F, 2, width)}")
        return ActionTokens(values=values)

    prototype = np.random.default_rng(stable_seed("action-prototype", affordance)).normal(size=(2, width))
    rng = np.random.default_rng(stable_seed("action", source.seed, video_id, affordance, F))
    values = prototype[None, :, :] + SYNTHETIC_NOISE * rng.normal(size=(F, 2, width))
    return ActionTokens(values=values)


def save_embeddings(
    path: Union[str, Path],
    video: VideoTokens,
    action: ActionTokens,
) -> Path:
    """Store a sample's embeddings as an A3DW file with tensors 'video' and 'action'."""
    return save_tensors(path, {"video": video.values, "action": action.values})
