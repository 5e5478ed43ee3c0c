"""Integration tests for train() and gradient_check()."""

import time

import numpy as np
import pytest

from src.autodiff import Tensor, finite_difference_check, matmul, ops, sum_all
from src.autodiff.ops import _emit
from src.common.exceptions import ConfigurationError, InvalidInputError, ParameterError
from src.dataset import SynthConfig, entry_to_sample, load_manifest, synth_generate
from src.experiments import load_run_config
from src.geometry import PointCloud
from src.metrics import evaluate
from src.model import EmbeddingSource, ModelParams, ModelSample
from src.trainer import TrainConfig, gradient_check, train


class TestTrain:
    """Test the training loop."""

    def test_log_has_one_entry_per_step(self, samples, tiny_model_config, loss_config):
        """Test step count and the 1-indexed log."""
        result = train(samples, tiny_model_config, loss_config, TrainConfig(epochs=2, learning_rate=1e-3))
        assert [entry.step for entry in result.log] == list(range(1, 7))
        assert result.log[-1].lr == pytest.approx(0.0, abs=1e-18)

    def test_same_seed_gives_identical_log(self, samples, tiny_model_config, loss_config):
        """Test bitwise-identical loss logs and parameters across reruns."""
        config = TrainConfig(max_steps=5, learning_rate=1e-2, seed=4, batch_size=2)
        a = train(samples, tiny_model_config, loss_config, config)
        b = train(samples, tiny_model_config, loss_config, config)
        assert [e.as_line() for e in a.log] == [e.as_line() for e in b.log]
        for name in a.params.names():
            assert a.params.arrays[name].tobytes() == b.params.arrays[name].tobytes()

    def test_zero_learning_rate_leaves_parameters(self, samples, tiny_model_config, loss_config):
        """Test lr = 0 keeps every parameter unchanged."""
        start = ModelParams.initialize(tiny_model_config, seed=1)
        result = train(
            samples, tiny_model_config, loss_config, TrainConfig(max_steps=4, learning_rate=0.0), params=start
        )
        for name in start.names():
            assert np.array_equal(result.params.arrays[name], start.arrays[name])

    def test_writes_checkpoint_and_log(self, tmp_path, samples, tiny_model_config, loss_config):
        """Test the checkpoint reloads and the log carries the config hash."""
        result = train(
            samples, tiny_model_config, loss_config, TrainConfig(max_steps=3),
            out_dir=tmp_path, config_hash="abc123",
        )
        reloaded = ModelParams.load(result.checkpoint_path, tiny_model_config)
        assert reloaded.arrays["decoder.w_q"].tobytes() == result.params.arrays["decoder.w_q"].tobytes()
        lines = result.log_path.read_text().splitlines()
        assert lines[0] == "#afford3d-losslog v1 config_hash=abc123"
        assert lines[1].split("\t") == ["step", "lr", "ce", "bce", "spatial", "iou", "total"]
        assert len(lines) == 5

    def test_empty_split_raises_error(self, tiny_model_config, loss_config):
        """Test that no training samples is a configuration error."""
        with pytest.raises(ConfigurationError):
            train([], tiny_model_config, loss_config, TrainConfig())

    def test_unlabeled_sample_raises_error(self, tiny_model_config, loss_config):
        """Test that training needs labels."""
        sample = ModelSample(
            cloud=PointCloud(coords=np.random.default_rng(0).normal(size=(20, 3))),
            embedding_source=EmbeddingSource.parse("synth:0"),
        )
        with pytest.raises(InvalidInputError):
            train([sample], tiny_model_config, loss_config, TrainConfig(max_steps=1))

    @pytest.mark.slow
    def test_single_sample_overfits(self, make_sample, tiny_model_config, loss_config):
        """Test that one sample is fit: loss falls after warmup and ends low."""
        config = tiny_model_config.model_copy(update={"d_model": 16, "patch_hidden": 16, "mlp_hidden": 16})
        result = train(
            [make_sample(7)], config, loss_config,
            TrainConfig(max_steps=300, learning_rate=2e-2, warmup_ratio=0.03),
        )
        totals = [e.total for e in result.log]
        after_warmup = totals[9:]
        decreasing = sum(b <= a for a, b in zip(after_warmup, after_warmup[1:]))
        assert decreasing >= 0.9 * (len(after_warmup) - 1)
        assert totals[-1] < 0.05


@pytest.mark.slow
class TestOverfitPreset:
    """Test the packaged overfit preset on 20 synthetic vessels."""

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_training_split_miou_reaches_target(self, tmp_path, seed):
        """Test that 500 steps on 2 types × 10 samples reach training mIoU ≥ 0.90."""
        synth = synth_generate(
            SynthConfig(types=2, samples_per_type=10, points=512, test_fraction=0.0, seed=seed), tmp_path
        )
        config = load_run_config("overfit_run", seed=seed)
        assert config.train.max_steps == 500 and config.model.frames == 8
        manifest = load_manifest(synth.manifest_path)
        samples = [entry_to_sample(e, manifest.base_dir) for e in manifest.split("train")]
        assert len(samples) == 20

        started = time.monotonic()
        result = train(samples, config.model, config.loss, config.train)
        assert time.monotonic() - started <= 300

        report = evaluate(
            manifest.entries, result.params, config.model, config.eval, base_dir=manifest.base_dir
        )
        assert report.overall.samples == 20
        assert report.overall.values["miou"] >= 0.90


def corrupted_relu(x: Tensor) -> Tensor:
    """relu whose backward doubles the upstream gradient."""
    mask = x.values > 0

    def backward_fn(g):
        return (2.0 * g * mask,)

    return _emit("relu", np.where(mask, x.values, 0.0), (x,), backward_fn)


class TestGradientCheck:
    """Test the end-to-end gradient check."""

    def test_all_tensors_pass(self, make_sample, tiny_model_config, loss_config):
        """Test every parameter tensor is within 1e-5 on a 64-point sample."""
        report = gradient_check(make_sample(11), tiny_model_config, loss_config)
        assert set(report.errors) == set(tiny_model_config.parameter_shapes())
        assert report.passed, report.lines()

    def test_subsampled_coordinates(self, make_sample, tiny_model_config, loss_config):
        """Test coords_per_tensor caps the checked coordinates."""
        report = gradient_check(make_sample(12), tiny_model_config, loss_config, coords_per_tensor=3)
        assert max(report.coordinates_checked.values()) == 3
        assert report.passed

    def test_corrupted_backward_is_reported(self, mocker, make_sample, tiny_model_config, loss_config):
        """Test a deliberately wrong backward rule fails the check."""
        mocker.patch.object(ops, "relu", corrupted_relu)
        report = gradient_check(make_sample(13), tiny_model_config, loss_config)
        assert not report.passed
        assert "patch.w1" in report.failures

    def test_nonpositive_tolerance_raises_error(self, make_sample, tiny_model_config, loss_config):
        """Test tolerance ≤ 0 is rejected."""
        with pytest.raises(ParameterError):
            gradient_check(make_sample(1), tiny_model_config, loss_config, tolerance=0.0)

    def test_linear_submodel_is_exact(self):
        """Test a linear-only map checks to ≤ 1e-9."""
        rng = np.random.default_rng(3)
        x, w = rng.normal(size=(5, 4)), rng.normal(size=(4, 3))
        assert finite_difference_check(lambda t: sum_all(matmul(Tensor(x), t)), Tensor(w)) <= 1e-9
