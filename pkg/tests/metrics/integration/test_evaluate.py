"""Integration tests for split evaluation."""

import numpy as np
import pytest

from src.common.exceptions import DatasetError
from src.dataset import SynthConfig, load_manifest, synth_generate
from src.metrics import EvalConfig, SampleMetrics, build_report, evaluate
from src.model import ModelConfig, ModelParams


@pytest.fixture
def dataset(tmp_path):
    result = synth_generate(SynthConfig(types=2, samples_per_type=6, points=64, seed=3), tmp_path)
    return load_manifest(result.manifest_path)


@pytest.fixture
def model_config():
    return ModelConfig(
        d_model=6, d_video=4, d_action=4, patch_hidden=5, mlp_hidden=5, num_tokens=8, k_patch=4, frames=2,
    )


class TestEvaluate:
    """Test evaluate over synthetic splits."""

    def test_oracle_scores_are_ideal(self, dataset, model_config):
        """Test mIoU = SIM = AUC = 1 and MAE = 0 with scores = labels."""
        report = evaluate(dataset.entries, None, model_config, base_dir=dataset.base_dir, oracle=True)
        overall = report.overall.values
        assert overall["miou"] == 1.0
        assert overall["auc"] == 1.0
        assert overall["sim"] == pytest.approx(1.0, abs=1e-12)
        assert overall["mae"] == 0.0
        assert report.oracle

    def test_constant_predictor(self, dataset, model_config, mocker):
        """Test MAE = mean|0.5 − gt| and AUC = 0.5 for a constant 0.5 predictor."""
        mocker.patch("src.metrics.evaluation.forward", side_effect=lambda s, p, c: np.full(s.cloud.n_points, 0.5))
        params = ModelParams.initialize(model_config, seed=0)
        report = evaluate(dataset.entries, params, model_config, base_dir=dataset.base_dir)
        for sample in report.samples:
            assert sample.auc == 0.5
            assert sample.mae == pytest.approx(0.5, abs=1e-15)

    def test_real_model_metrics_in_range(self, dataset, model_config):
        params = ModelParams.initialize(model_config, seed=1)
        report = evaluate(dataset.entries, params, model_config, base_dir=dataset.base_dir)
        for name in ("miou", "auc", "sim", "mae"):
            assert 0.0 <= report.overall.values[name] <= 1.0
        assert [r.name for r in report.rows] == ["grasp", "open"]

    def test_split_label_recorded(self, dataset, model_config):
        report = evaluate(dataset.entries, None, model_config, split_label="unseen", base_dir=dataset.base_dir, oracle=True)
        assert report.split_label == "unseen"

    def test_thread_count_does_not_change_results(self, dataset, model_config, monkeypatch):
        """Test that parallel evaluation keeps the sequential ordering and values."""
        params = ModelParams.initialize(model_config, seed=2)
        monkeypatch.setenv("AFFORD3D_THREADS", "1")
        serial = evaluate(dataset.entries, params, model_config, base_dir=dataset.base_dir)
        monkeypatch.setenv("AFFORD3D_THREADS", "4")
        parallel = evaluate(dataset.entries, params, model_config, base_dir=dataset.base_dir)
        assert serial.samples == parallel.samples
        assert serial.overall == parallel.overall

    def test_pairing_violation_is_dataset_error(self, dataset, model_config):
        """Test that a test cloud shared by two videos blocks evaluation."""
        test = [e for e in dataset.entries if e.split == "test"]
        clash = test[0].model_copy(update={"video_id": "intruder"})
        with pytest.raises(DatasetError, match="intruder"):
            evaluate(dataset.entries + [clash], None, model_config, base_dir=dataset.base_dir, oracle=True)

    def test_empty_split(self, dataset, model_config):
        train_only = [e.with_split("train") for e in dataset.entries]
        with pytest.raises(DatasetError):
            evaluate(train_only, None, model_config, base_dir=dataset.base_dir, oracle=True)


class TestAggregation:
    """Test the count-weighted overall row."""

    def test_three_plus_two(self):
        """Test overall = (3·rowA + 2·rowB) / 5 for every metric."""
        rng = np.random.default_rng(9)
        samples = [
            SampleMetrics(
                video_id=f"v{i}", affordance_type="grasp" if i < 3 else "open", object_class="mug",
                n_points=10, miou=rng.uniform(), auc=rng.uniform(), sim=rng.uniform(), mae=rng.uniform(),
            )
            for i in range(5)
        ]
        report = build_report(samples, "seen", EvalConfig())
        a, b = report.row("grasp"), report.row("open")
        assert (a.samples, b.samples) == (3, 2)
        for name in ("miou", "auc", "sim", "mae"):
            expected = (3 * a.values[name] + 2 * b.values[name]) / 5
            assert abs(report.overall.values[name] - expected) <= 1e-12

    def test_undefined_metrics_excluded_with_counts(self):
        samples = [
            SampleMetrics(video_id="a", affordance_type="grasp", object_class="mug", n_points=4, miou=0.4, auc=None, sim=0.2, mae=0.1),
            SampleMetrics(video_id="b", affordance_type="grasp", object_class="mug", n_points=4, miou=0.6, auc=0.8, sim=0.4, mae=0.3),
        ]
        row = build_report(samples, "seen", EvalConfig()).row("grasp")
        assert row.values["auc"] == 0.8
        assert row.counts["auc"] == 1
        assert row.skipped["auc"] == 1
