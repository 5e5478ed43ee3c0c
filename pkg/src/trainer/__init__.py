"""Trainer Module - AdamW, cosine schedule, the training loop and gradient checks."""

from src.trainer.models import (
    TrainConfig,
    OptimizerState,
    StepLog,
    TrainResult,
    GradientCheckReport,
)
from src.trainer.schedule import cosine_schedule, warmup_steps
from src.trainer.optimizer import adamw_step
from src.trainer.training import (
    TrainingExample,
    prepare_examples,
    example_loss,
    format_loss_log,
    train,
    gradient_check,
)

__all__ = [
    "TrainConfig",
    "OptimizerState",
    "StepLog",
    "TrainResult",
    "GradientCheckReport",
    "cosine_schedule",
    "warmup_steps",
    "adamw_step",
    "TrainingExample",
    "prepare_examples",
    "example_loss",
    "format_loss_log",
    "train",
    "gradient_check",
]
