"""AFF-query fusion: a learnable query attention-pools video and action tokens."""

import logging
import math

from src.autodiff import ops
from src.autodiff.tensor import Tensor
from src.common.exceptions import ShapeError
from src.model.models import ActionTokens, AffQuery, ParamsLike, VideoTokens, as_tensors

logger = logging.getLogger(__name__)


def attention_pool(sequence: Tensor, params: ParamsLike) -> Tensor:
    """
    Single-query scaled dot-product pooling of an S×D sequence.

    Returns:
        1×D output projection of the attended value
    """
    p = as_tensors(params)
    d = p["fusion.query"].shape[1]
    if sequence.values.ndim != 2 or sequence.shape[1] != d:
        raise ShapeError(f"fusion sequence must be S×{d}, got {sequence.shape}")
    keys = ops.matmul(sequence, p["fusion.w_k"])
    values = ops.matmul(sequence, p["fusion.w_v"])
    scores = ops.scale(ops.matmul(p["fusion.query"], ops.transpose(keys)), 1.0 / math.sqrt(d))
    attention = ops.softmax_rows(scores)
    pooled = ops.matmul(attention, values)
    return ops.add_bias(ops.matmul(pooled, p["fusion.w_o"]), p["fusion.b_o"])


def fuse_aff_query(
    video: VideoTokens,
    action: ActionTokens,
    params: ParamsLike,
    use_action: bool = True,
) -> AffQuery:
    """
    Project video rows and flattened action tokens to D, then attention-pool them.

    Args:
        video: F×D_v video embeddings
        action: F×2×D_a action tokens
        params: Model parameters (uses fusion.*)
        use_action: Include the action tokens in the pooled sequence

    Returns:
        AffQuery (1×D)

    Raises:
        ShapeError: If embedding widths disagree with the input projections
    """
    p = as_tensors(params)
    video_in = p["fusion.video_in"]
    action_in = p["fusion.action_in"]
    if video.values.shape[1] != video_in.shape[0]:
        raise ShapeError(f"video width {video.values.shape[1]} != D_v {video_in.shape[0]}")

    rows = [ops.matmul(Tensor(video.values), video_in)]
    if use_action:
        flat = action.flattened()
        if flat.shape[1] != action_in.shape[0]:
            raise ShapeError(f"action width {flat.shape[1]} != D_a {action_in.shape[0]}")
        rows.append(ops.matmul(Tensor(flat), action_in))
    sequence = ops.concat_rows(rows)
    return AffQuery(embedding=attention_pool(sequence, p))
