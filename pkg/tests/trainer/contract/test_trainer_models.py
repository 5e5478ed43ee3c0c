"""Contract tests for trainer models."""

import pytest
from pydantic import ValidationError

from src.trainer import GradientCheckReport, StepLog, TrainConfig


class TestTrainConfig:
    """Test TrainConfig validation."""

    def test_defaults(self):
        """Test lr 2e-4, weight decay 0, warmup 0.03, 10 epochs, batch size 1."""
        config = TrainConfig()
        assert config.learning_rate == 2e-4
        assert config.weight_decay == 0.0
        assert config.warmup_ratio == 0.03
        assert config.epochs == 10
        assert config.batch_size == 1
        assert (config.beta1, config.beta2, config.eps) == (0.9, 0.999, 1e-8)

    def test_warmup_ratio_must_be_below_one(self):
        """Test that warmup_ratio = 1 is rejected."""
        with pytest.raises(ValidationError):
            TrainConfig(warmup_ratio=1.0)

    def test_negative_learning_rate_rejected(self):
        """Test that lr < 0 is rejected."""
        with pytest.raises(ValidationError):
            TrainConfig(learning_rate=-1e-3)

    def test_total_steps(self):
        """Test epochs × ceil(n / batch) and the max_steps override."""
        assert TrainConfig(epochs=3, batch_size=2).total_steps(5) == 9
        assert TrainConfig(epochs=3, max_steps=40).total_steps(5) == 40


class TestStepLog:
    """Test the loss-log line format."""

    def test_line_is_tab_separated(self):
        """Test 'step lr ce bce spatial iou total'."""
        line = StepLog(step=3, lr=1e-4, ce=0.0, bce=0.5, spatial=0.25, iou=0.125, total=0.875).as_line()
        assert line.split("\t") == ["3", "0.0001", "0.0", "0.5", "0.25", "0.125", "0.875"]


class TestGradientCheckReport:
    """Test report verdicts."""

    def test_failures_listed(self):
        """Test that tensors above tolerance are failures."""
        report = GradientCheckReport(tolerance=1e-5, errors={"a": 1e-7, "b": 1e-3})
        assert report.failures == ["b"]
        assert not report.passed
        assert report.max_error == 1e-3
        assert report.lines()[1].endswith("FAIL")
