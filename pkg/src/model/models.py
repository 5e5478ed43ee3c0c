"""Pydantic models for the model module: widths, parameters and token types."""

import logging
from collections import OrderedDict
from pathlib import Path
from typing import Dict, Literal, Mapping, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.autodiff.checkpoint import load_tensors, save_tensors
from src.autodiff.tensor import Tensor
from src.common.exceptions import FormatError, ShapeError

logger = logging.getLogger(__name__)

SUPPORTED_FRAMES = (2, 4, 8, 16)

BIAS_NAMES = frozenset({
    "patch.b1", "patch.b2", "fusion.b_o", "decoder.mlp_b1", "decoder.mlp_b2",
})


class ModelConfig(BaseModel):
    """Widths and sampling counts of the toy encoder/fusion/decoder stack."""

    model_config = ConfigDict(extra="forbid")

    d_model: int = Field(default=64, ge=1, description="Shared feature width D")
    d_video: int = Field(default=64, ge=1, description="Video embedding width D_v")
    d_action: int = Field(default=64, ge=1, description="Action embedding width D_a")
    patch_hidden: int = Field(default=64, ge=1, description="Patch-encoder MLP hidden width")
    mlp_hidden: int = Field(default=64, ge=1, description="Mask-head MLP hidden width")
    num_tokens: int = Field(default=64, ge=1, description="Token centers M picked by FPS")
    k_patch: int = Field(default=16, ge=1, description="Points per patch")
    frames: int = Field(default=8, description="Sampled video frames F")
    use_action_tokens: bool = Field(default=True, description="Feed latent action tokens to fusion")
    fps_seed: int = Field(default=0, description="Seed of the first FPS draw")
    init_seed: int = Field(default=0, description="Seed of parameter initialization")

    @field_validator("frames")
    @classmethod
    def validate_frames(cls, value: int) -> int:
        if value not in SUPPORTED_FRAMES:
            raise ValueError(f"frames must be one of {SUPPORTED_FRAMES}, got {value}")
        return value

    def parameter_shapes(self) -> "OrderedDict[str, Tuple[int, int]]":
        """Name → shape of every trainable tensor, in checkpoint order."""
        d, hp, hm = self.d_model, self.patch_hidden, self.mlp_hidden
        return OrderedDict([
            ("patch.w1", (3 * self.k_patch + 3, hp)),
            ("patch.b1", (1, hp)),
            ("patch.w2", (hp, d)),
            ("patch.b2", (1, d)),
            ("fusion.video_in", (self.d_video, d)),
            ("fusion.action_in", (self.d_action, d)),
            ("fusion.query", (1, d)),
            ("fusion.w_k", (d, d)),
            ("fusion.w_v", (d, d)),
            ("fusion.w_o", (d, d)),
            ("fusion.b_o", (1, d)),
            ("decoder.w_q", (d, d)),
            ("decoder.w_k", (d, d)),
            ("decoder.w_v", (d, d)),
            ("decoder.mlp_w1", (d, hm)),
            ("decoder.mlp_b1", (1, hm)),
            ("decoder.mlp_w2", (hm, d)),
            ("decoder.mlp_b2", (1, d)),
        ])


class ModelParams:
    """All trainable tensors of the stack, keyed by name."""

    def __init__(self, arrays: Mapping[str, np.ndarray], config: ModelConfig):
        """
        Args:
            arrays: Name → float64 array
            config: Widths the arrays must agree with

        Raises:
            ShapeError: On missing, unexpected or mis-shaped tensors
        """
        expected = config.parameter_shapes()
        missing = [name for name in expected if name not in arrays]
        unexpected = [name for name in arrays if name not in expected]
        if missing or unexpected:
            raise ShapeError(f"parameter set mismatch: missing={missing}, unexpected={unexpected}")
        self.arrays: "OrderedDict[str, np.ndarray]" = OrderedDict()
        for name, shape in expected.items():
            array = np.array(arrays[name], dtype=np.float64)
            if array.shape != shape:
                raise ShapeError(f"parameter {name}: expected shape {shape}, got {array.shape}")
            self.arrays[name] = array
        self.config = config

    @classmethod
    def initialize(cls, config: ModelConfig, seed: Optional[int] = None) -> "ModelParams":
        """Seeded initialization: weights ~ N(0, 1/fan_in), biases zero."""
        rng = np.random.default_rng(config.init_seed if seed is None else seed)
        arrays = OrderedDict()
        for name, shape in config.parameter_shapes().items():
            if name in BIAS_NAMES:
                arrays[name] = np.zeros(shape)
            elif name == "fusion.query":
                arrays[name] = rng.normal(0.0, 1.0 / np.sqrt(shape[1]), size=shape)
            else:
                arrays[name] = rng.normal(0.0, 1.0 / np.sqrt(shape[0]), size=shape)
        return cls(arrays, config)

    def names(self) -> list[str]:
        return list(self.arrays)

    def copy(self) -> "ModelParams":
        return ModelParams({k: v.copy() for k, v in self.arrays.items()}, self.config)

    def tensors(self, requires_grad: bool = False) -> Dict[str, Tensor]:
        """Fresh Tensor views of every parameter (copies of the values)."""
        return {
            name: Tensor(array.copy(), requires_grad=requires_grad, name=name)
            for name, array in self.arrays.items()
        }

    def num_values(self) -> int:
        return int(sum(a.size for a in self.arrays.values()))

    def save(self, path: Union[str, Path]) -> Path:
        """Write an A3DW checkpoint."""
        return save_tensors(path, self.arrays)

    @classmethod
    def load(cls, path: Union[str, Path], config: ModelConfig) -> "ModelParams":
        """
        Read an A3DW checkpoint.

        Raises:
            FormatError: If the checkpoint does not match the configured widths
        """
        arrays = load_tensors(path)
        try:
            return cls(arrays, config)
        except ShapeError as e:
            raise FormatError(f"checkpoint {path} incompatible with model config: {e.message}")


ParamsLike = Union[ModelParams, Mapping[str, Tensor]]


def as_tensors(params: ParamsLike) -> Mapping[str, Tensor]:
    """Accept ModelParams or an existing name → Tensor mapping."""
    if isinstance(params, ModelParams):
        return params.tensors(requires_grad=False)
    return params


class VideoTokens(BaseModel):
    """F×D_v video embedding rows."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=np.float64)
        if value.ndim != 2:
            raise FormatError(f"video tokens must be F×D_v, got shape {value.shape}")
        if value.shape[0] not in SUPPORTED_FRAMES:
            raise FormatError(f"video frame count must be one of {SUPPORTED_FRAMES}, got {value.shape[0]}")
        if not np.all(np.isfinite(value)):
            raise FormatError("video tokens must be finite")
        return value

    @property
    def frames(self) -> int:
        return int(self.values.shape[0])


class ActionTokens(BaseModel):
    """F×2×D_a latent action tokens (two per sampled frame)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray

    @field_validator("values", mode="before")
    @classmethod
    def validate_values(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=np.float64)
        if value.ndim != 3 or value.shape[1] != 2:
            raise FormatError(f"action tokens must be F×2×D_a, got shape {value.shape}")
        if not np.all(np.isfinite(value)):
            raise FormatError("action tokens must be finite")
        return value

    @property
    def frames(self) -> int:
        return int(self.values.shape[0])

    def flattened(self) -> np.ndarray:
        """(2F)×D_a rows, frame-major."""
        f, _, d = self.values.shape
        return self.values.reshape(2 * f, d)


class TokenFeatures(BaseModel):
    """Sparse patch embeddings and their FPS-selected centers."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    features: Tensor = Field(..., description="M×D patch embeddings")
    centers: np.ndarray = Field(..., description="M×3 center coordinates")
    center_indices: list[int] = Field(..., description="Cloud indices of the centers")


class DensePointFeatures(BaseModel):
    """N×D features aligned 1:1 with the cloud points."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    features: Tensor


class AffQuery(BaseModel):
    """1×D projected affordance query embedding."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    embedding: Tensor


class DecoderOutput(BaseModel):
    """Per-point logits plus the attention row and fused vector that produced them."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    logits: Tensor = Field(..., description="N×1 logits")
    attention: Tensor = Field(..., description="1×N attention weights")
    fused: Tensor = Field(..., description="1×D attended point feature")


class EmbeddingSource(BaseModel):
    """Where a sample's video/action embeddings come from."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["file", "synthetic"]
    path: Optional[str] = None
    seed: Optional[int] = None

    @classmethod
    def parse(cls, text: str) -> "EmbeddingSource":
        """'synth:<seed>' selects synthetic mode; anything else is a file path."""
        if text.startswith("synth:"):
            try:
                return cls(kind="synthetic", seed=int(text.split(":", 1)[1]))
            except ValueError:
                raise FormatError(f"bad synthetic embedding source {text!r}")
        return cls(kind="file", path=text)

    def render(self) -> str:
        return f"synth:{self.seed}" if self.kind == "synthetic" else str(self.path)
