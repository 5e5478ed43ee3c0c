"""Model Module - stub encoders, feature propagation, AFF-query fusion and the mask decoder."""

from src.model.models import (
    SUPPORTED_FRAMES,
    ModelConfig,
    ModelParams,
    VideoTokens,
    ActionTokens,
    TokenFeatures,
    DensePointFeatures,
    AffQuery,
    DecoderOutput,
    EmbeddingSource,
)
from src.model.encoders import (
    PatchGeometry,
    build_patches,
    embed_patches,
    encode_points_stub,
    encode_video_stub,
    encode_action_stub,
    save_embeddings,
)
from src.model.propagation import interpolation_weights, propagate_features
from src.model.fusion import attention_pool, fuse_aff_query
from src.model.decoder import cross_attention_decode
from src.model.pipeline import (
    ModelSample,
    PreparedSample,
    prepare_sample,
    decode_prepared,
    forward_prepared,
    forward,
)

__all__ = [
    "SUPPORTED_FRAMES",
    "ModelConfig",
    "ModelParams",
    "VideoTokens",
    "ActionTokens",
    "TokenFeatures",
    "DensePointFeatures",
    "AffQuery",
    "DecoderOutput",
    "EmbeddingSource",
    "PatchGeometry",
    "build_patches",
    "embed_patches",
    "encode_points_stub",
    "encode_video_stub",
    "encode_action_stub",
    "save_embeddings",
    "interpolation_weights",
    "propagate_features",
    "attention_pool",
    "fuse_aff_query",
    "cross_attention_decode",
    "ModelSample",
    "PreparedSample",
    "prepare_sample",
    "decode_prepared",
    "forward_prepared",
    "forward",
]
