"""Deterministic desk-scale training loop and the end-to-end gradient check."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.autodiff.gradcheck import finite_difference_check
from src.autodiff.tape import Tape, backward
from src.autodiff.tensor import Tensor
from src.common.exceptions import ConfigurationError, InvalidInputError, ParameterError
from src.losses.models import LossBreakdown, LossConfig, SpatialWeights
from src.losses.objectives import composite_objective, loss_node
from src.losses.spatial import spatial_weights
from src.model.models import ModelConfig, ModelParams
from src.model.pipeline import ModelSample, PreparedSample, forward_prepared, prepare_sample
from src.trainer.models import (
    GradientCheckReport,
    OptimizerState,
    StepLog,
    TrainConfig,
    TrainResult,
)
from src.trainer.optimizer import adamw_step
from src.trainer.schedule import cosine_schedule

logger = logging.getLogger(__name__)

LOSS_LOG_HEADER = "#afford3d-losslog v1"
LOSS_LOG_COLUMNS = ("step", "lr", "ce", "bce", "spatial", "iou", "total")


@dataclass(frozen=True)
class TrainingExample:
    """A prepared sample with its labels and spatial weights."""

    prepared: PreparedSample
    labels: np.ndarray
    omega: SpatialWeights
    affordance: str


def prepare_examples(
    samples: Sequence[ModelSample],
    model_config: ModelConfig,
    loss_config: LossConfig,
) -> List[TrainingExample]:
    """
    Precompute everything about each sample that does not depend on parameters.

    Raises:
        InvalidInputError: If a sample has no labels
    """
    examples = []
    for sample in samples:
        if sample.cloud.labels is None:
            raise InvalidInputError(f"sample {sample.video_id or '?'} has no ground-truth labels")
        prepared = prepare_sample(sample, model_config)
        omega = spatial_weights(prepared.normalized.coords, loss_config.radius, loss_config.sigma)
        examples.append(TrainingExample(
            prepared=prepared,
            labels=np.asarray(prepared.labels, dtype=np.float64),
            omega=omega,
            affordance=sample.affordance,
        ))
    return examples


def example_loss(
    example: TrainingExample,
    tensors: Dict[str, Tensor],
    model_config: ModelConfig,
    loss_config: LossConfig,
) -> tuple[Tensor, LossBreakdown]:
    """Forward one example and attach its composite loss to the active tape."""
    probabilities = forward_prepared(example.prepared, tensors, model_config)
    breakdown = composite_objective(example.labels, probabilities.values, example.omega, loss_config)
    return loss_node(probabilities, breakdown), breakdown


def _mean_breakdown(parts: Sequence[LossBreakdown]) -> Dict[str, float]:
    keys = ("ce", "bce", "spatial", "iou", "total")
    return {key: math.fsum(getattr(p, key) for p in parts) / len(parts) for key in keys}


def _batch_order(n: int, total: int, batch_size: int, seed: int) -> List[List[int]]:
    """Sample indices per step: one seeded permutation per epoch, cut into batches."""
    rng = np.random.default_rng(seed)
    batches: List[List[int]] = []
    while len(batches) < total:
        order = [int(i) for i in rng.permutation(n)]
        for start in range(0, n, batch_size):
            batches.append(order[start:start + batch_size])
            if len(batches) == total:
                break
    return batches


def format_loss_log(log: Sequence[StepLog], config_hash: str = "") -> str:
    lines = [f"{LOSS_LOG_HEADER} config_hash={config_hash}", "\t".join(LOSS_LOG_COLUMNS)]
    lines.extend(entry.as_line() for entry in log)
    return "\n".join(lines) + "\n"


def train(
    samples: Sequence[ModelSample],
    model_config: ModelConfig,
    loss_config: LossConfig,
    train_config: TrainConfig,
    params: Optional[ModelParams] = None,
    out_dir: Optional[Path] = None,
    config_hash: str = "",
) -> TrainResult:
    """
    Train the model with AdamW on a cosine schedule.

    Every step shuffles deterministically, sums per-sample gradients in
    sample order and averages them over the batch.

    Args:
        samples: Labeled training samples
        model_config: Widths and sampling counts
        loss_config: Composite-loss configuration
        train_config: Optimizer, schedule and step budget
        params: Starting parameters (default: seeded initialization)
        out_dir: If given, the checkpoint and loss log are written here
        config_hash: Recorded in the loss log header

    Returns:
        TrainResult with trained parameters and the per-step log

    Raises:
        ConfigurationError: If the training split is empty
    """
    if not samples:
        raise ConfigurationError("training split is empty")

    params = ModelParams.initialize(model_config) if params is None else params.copy()
    examples = prepare_examples(samples, model_config, loss_config)
    total = train_config.total_steps(len(examples))
    batches = _batch_order(len(examples), total, train_config.batch_size, train_config.seed)
    state = OptimizerState()
    log: List[StepLog] = []
    steps_per_epoch = math.ceil(len(examples) / train_config.batch_size)

    logger.info(
        f"Training on {len(examples)} samples for {total} steps "
        f"({params.num_values()} parameters, lr={train_config.learning_rate})"
    )

    for step, batch in enumerate(batches, start=1):
        grads = {name: np.zeros_like(value) for name, value in params.arrays.items()}
        parts = []
        for index in batch:
            tensors = params.tensors(requires_grad=True)
            with Tape() as tape:
                loss, breakdown = example_loss(examples[index], tensors, model_config, loss_config)
            backward(tape, loss)
            for name, tensor in tensors.items():
                grads[name] += tensor.grad
            parts.append(breakdown)
        for name in grads:
            grads[name] /= len(batch)

        lr = cosine_schedule(step, total, train_config.warmup_ratio, train_config.learning_rate)
        adamw_step(
            params.arrays,
            grads,
            state,
            lr,
            beta1=train_config.beta1,
            beta2=train_config.beta2,
            eps=train_config.eps,
            weight_decay=train_config.weight_decay,
        )
        entry = StepLog(step=step, lr=lr, **_mean_breakdown(parts))
        log.append(entry)
        logger.debug(f"step {step}: {entry.as_line()}")
        if step % steps_per_epoch == 0 or step == total:
            logger.info(f"Step {step}/{total}: total loss {entry.total:.5f}")

    result = TrainResult(params=params, log=log)
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        result.checkpoint_path = params.save(out_dir / "model.a3dw")
        result.log_path = out_dir / "loss_log.tsv"
        result.log_path.write_text(format_loss_log(log, config_hash))
        logger.info(f"Checkpoint written to {result.checkpoint_path}")
    return result


def gradient_check(
    sample: ModelSample,
    model_config: ModelConfig,
    loss_config: LossConfig,
    params: Optional[ModelParams] = None,
    tolerance: float = 1e-5,
    h: float = 1e-6,
    coords_per_tensor: Optional[int] = None,
    seed: int = 0,
) -> GradientCheckReport:
    """
    Finite-difference check of the composite loss w.r.t. every parameter tensor.

    Args:
        sample: Labeled sample
        model_config: Widths and sampling counts
        loss_config: Composite-loss configuration
        params: Parameters to check at (default: seeded initialization)
        tolerance: Max allowed relative error (> 0)
        h: Difference step
        coords_per_tensor: Check a seeded subset of coordinates per tensor (default: all)
        seed: Seed of the coordinate subset

    Returns:
        GradientCheckReport listing every tensor by name

    Raises:
        ParameterError: If tolerance ≤ 0
    """
    if not tolerance > 0:
        raise ParameterError(f"tolerance must be positive, got {tolerance}")

    params = ModelParams.initialize(model_config) if params is None else params
    example = prepare_examples([sample], model_config, loss_config)[0]
    rng = np.random.default_rng(seed)
    report = GradientCheckReport(tolerance=tolerance)

    for name in params.names():
        fixed = params.tensors(requires_grad=False)

        def objective(candidate: Tensor, name: str = name) -> Tensor:
            tensors = dict(fixed)
            tensors[name] = candidate
            loss, _ = example_loss(example, tensors, model_config, loss_config)
            return loss

        size = params.arrays[name].size
        coords = None
        if coords_per_tensor is not None and coords_per_tensor < size:
            coords = sorted(int(i) for i in rng.choice(size, coords_per_tensor, replace=False))
        error = finite_difference_check(objective, Tensor(params.arrays[name], name=name), h=h, coords=coords)
        report.errors[name] = error
        report.coordinates_checked[name] = size if coords is None else len(coords)
        logger.debug(f"gradcheck {name}: {error:.3e}")

    if report.passed:
        logger.info(f"Gradient check passed: max rel error {report.max_error:.3e} ≤ {tolerance}")
    else:
        logger.warning(f"Gradient check failed for {report.failures}")
    return report
