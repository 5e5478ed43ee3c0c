"""Cross-attention affordance decoder and per-point mask head."""

import logging
import math

from src.autodiff import ops
from src.common.exceptions import ShapeError
from src.model.models import AffQuery, DecoderOutput, DensePointFeatures, ParamsLike, as_tensors

logger = logging.getLogger(__name__)


def cross_attention_decode(
    aff: AffQuery,
    dense: DensePointFeatures,
    params: ParamsLike,
) -> DecoderOutput:
    """
    Attend from the affordance query over dense point features and score every point.

    A_f = softmax(Q·Kᵀ/√D)·V with Q from the query and K, V from the points;
    logit_i = ⟨dense_i, mlp(A_f)⟩/√D.

    Args:
        aff: 1×D affordance query
        dense: N×D point features
        params: Model parameters (uses decoder.*)

    Returns:
        DecoderOutput with N×1 logits

    Raises:
        ShapeError: If widths disagree
    """
    p = as_tensors(params)
    d = p["decoder.w_q"].shape[0]
    query = aff.embedding
    points = dense.features
    if query.shape != (1, d):
        raise ShapeError(f"affordance query must be 1×{d}, got {query.shape}")
    if points.values.ndim != 2 or points.shape[1] != d:
        raise ShapeError(f"dense features must be N×{d}, got {points.shape}")

    q = ops.matmul(query, p["decoder.w_q"])
    k = ops.matmul(points, p["decoder.w_k"])
    v = ops.matmul(points, p["decoder.w_v"])
    inv_sqrt_d = 1.0 / math.sqrt(d)
    attention = ops.softmax_rows(ops.scale(ops.matmul(q, ops.transpose(k)), inv_sqrt_d))
    fused = ops.matmul(attention, v)

    hidden = ops.relu(ops.add_bias(ops.matmul(fused, p["decoder.mlp_w1"]), p["decoder.mlp_b1"]))
    mask_embedding = ops.add_bias(ops.matmul(hidden, p["decoder.mlp_w2"]), p["decoder.mlp_b2"])
    logits = ops.scale(ops.matmul(points, ops.transpose(mask_embedding)), inv_sqrt_d)
    return DecoderOutput(logits=logits, attention=attention, fused=fused)
