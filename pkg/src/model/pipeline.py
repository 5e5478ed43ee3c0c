"""End-to-end forward pass: cloud + embeddings → per-point affordance probabilities."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.autodiff import ops
from src.autodiff.tensor import Tensor
from src.geometry.models import PointCloud
from src.geometry.normalization import normalize_cloud
from src.model.decoder import cross_attention_decode
from src.model.encoders import (
    PatchGeometry,
    build_patches,
    embed_patches,
    encode_action_stub,
    encode_video_stub,
)
from src.model.fusion import fuse_aff_query
from src.model.models import (
    ActionTokens,
    DecoderOutput,
    EmbeddingSource,
    ModelConfig,
    ParamsLike,
    VideoTokens,
    as_tensors,
)
from src.model.propagation import interpolation_weights, propagate_with_weights

logger = logging.getLogger(__name__)


class ModelSample(BaseModel):
    """One grounding query: an object cloud plus the source of its video/action embeddings."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    cloud: PointCloud
    embedding_source: EmbeddingSource
    video_id: str = ""
    affordance: str = ""
    base_dir: Optional[Path] = None


@dataclass(frozen=True)
class PreparedSample:
    """Parameter-independent inputs of one sample, computed once and reused every step."""

    normalized: PointCloud
    patches: PatchGeometry
    interpolation: np.ndarray
    video: VideoTokens
    action: ActionTokens

    @property
    def n_points(self) -> int:
        return self.normalized.n_points

    @property
    def labels(self) -> Optional[np.ndarray]:
        return self.normalized.labels


def prepare_sample(sample: ModelSample, config: ModelConfig) -> PreparedSample:
    """
    Normalize the cloud, pick token centers and patches, and load embeddings.

    Raises:
        ParameterError: If the patch size exceeds N
        FormatError: If stored embeddings do not match the configured widths
    """
    normalized = normalize_cloud(sample.cloud)
    n = normalized.n_points
    patches = build_patches(normalized, min(config.num_tokens, n), config.k_patch, config.fps_seed)
    weights = interpolation_weights(patches.centers, normalized.coords)
    video = encode_video_stub(
        sample.embedding_source,
        config.frames,
        config.d_video,
        video_id=sample.video_id,
        affordance=sample.affordance,
        base_dir=sample.base_dir,
    )
    action = encode_action_stub(
        sample.embedding_source,
        config.frames,
        config.d_action,
        video_id=sample.video_id,
        affordance=sample.affordance,
        base_dir=sample.base_dir,
    )
    return PreparedSample(
        normalized=normalized,
        patches=patches,
        interpolation=weights,
        video=video,
        action=action,
    )


def decode_prepared(
    prepared: PreparedSample,
    params: ParamsLike,
    config: ModelConfig,
) -> DecoderOutput:
    """Run the trainable part of the stack on a prepared sample."""
    p = as_tensors(params)
    tokens = embed_patches(prepared.patches, p)
    dense = propagate_with_weights(tokens.features, prepared.interpolation)
    aff = fuse_aff_query(prepared.video, prepared.action, p, use_action=config.use_action_tokens)
    return cross_attention_decode(aff, dense, p)


def forward_prepared(
    prepared: PreparedSample,
    params: ParamsLike,
    config: ModelConfig,
) -> Tensor:
    """N×1 probabilities as a tensor (recorded on the active tape, if any)."""
    return ops.sigmoid(decode_prepared(prepared, params, config).logits)


def forward(sample: ModelSample, params: ParamsLike, config: ModelConfig) -> np.ndarray:
    """
    Predict the affordance mask of one sample.

    The token count is capped at N; the patch size is not, since it fixes
    the width of the patch MLP.

    Args:
        sample: Cloud and embedding source
        params: Model parameters
        config: Widths, frame count and sampling counts

    Returns:
        Length-N probabilities in (0, 1), aligned with the input point order
    """
    prepared = prepare_sample(sample, config)
    probabilities = forward_prepared(prepared, params, config)
    logger.debug(f"Forward pass over {prepared.n_points} points ({sample.affordance or 'unlabeled'})")
    return probabilities.values.reshape(-1).copy()
