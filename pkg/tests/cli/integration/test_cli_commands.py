"""Integration tests for the afford3d executable."""

import math

import numpy as np
import pytest

from src.cli.heatmap import read_heatmap_ply
from src.cli.main import main
from src.dataset import load_manifest
from src.experiments.run_config import load_run_config
from src.geometry import PointCloud, save_cloud
from src.model import ModelParams


class TestDatasetCommands:
    """Test dataset synth / validate / split / map."""

    def test_synth_is_deterministic(self, synth_dir, tmp_path):
        """Test that the same flags write an identical dataset."""
        again = tmp_path / "again"
        assert main(["dataset", "synth", "--types", "2", "--samples", "5", "--points", "64", "--seed", "7", "--out", str(again)]) == 0
        assert (again / "manifest.tsv").read_bytes() == (synth_dir / "manifest.tsv").read_bytes()
        assert (again / "clouds" / "open-004.pc").read_bytes() == (synth_dir / "clouds" / "open-004.pc").read_bytes()

    def test_synth_bad_points(self, tmp_path):
        """Test that fewer than 32 points is a usage error (exit 2)."""
        assert main(["dataset", "synth", "--points", "16", "--out", str(tmp_path / "x")]) == 2

    def test_synth_zero_samples(self, tmp_path):
        """Test that --samples 0 is a usage error and writes nothing."""
        assert main(["dataset", "synth", "--samples", "0", "--out", str(tmp_path / "x")]) == 2
        assert not (tmp_path / "x").exists()

    def test_validate_clean(self, synth_dir, capsys):
        assert main(["dataset", "validate", "--manifest", str(synth_dir / "manifest.tsv")]) == 0
        assert "0 violation(s)" in capsys.readouterr().out

    def test_validate_mutated(self, synth_dir, capsys):
        """Test that a test cloud reused by a second video fails with the violation listed."""
        path = synth_dir / "manifest.tsv"
        lines = path.read_text().splitlines()
        test_row = next(line for line in lines if line.endswith("\ttest"))
        fields = test_row.split("\t")
        fields[0] = "intruder"
        path.write_text("\n".join(lines + ["\t".join(fields)]) + "\n")

        assert main(["dataset", "validate", "--manifest", str(path)]) == 1
        assert "intruder" in capsys.readouterr().out

    def test_validate_missing_manifest(self, tmp_path):
        assert main(["dataset", "validate", "--manifest", str(tmp_path / "none.tsv")]) == 1

    def test_split_unseen_holdout(self, synth_dir):
        """Test the hold-out property by re-reading the rewritten manifest."""
        path = synth_dir / "manifest.tsv"
        assert main(["dataset", "split", "--manifest", str(path), "--mode", "unseen", "--holdout", "mug"]) == 0
        entries = load_manifest(path).entries
        assert all(e.split == "test" for e in entries if e.object_class == "mug")
        assert all(e.object_class != "mug" for e in entries if e.split == "train")

    def test_split_to_other_file(self, synth_dir):
        out = synth_dir / "seen.tsv"
        assert main(["dataset", "split", "--manifest", str(synth_dir / "manifest.tsv"), "--output", str(out), "--seed", "3"]) == 0
        assert len(load_manifest(out).entries) == 10

    def test_map_queues_unmapped(self, tmp_path, capsys):
        pairs = tmp_path / "pairs.txt"
        pairs.write_text("opening bottle\njuggling bottle\n")
        queue = tmp_path / "review.txt"
        assert main(["dataset", "map", "--pairs", str(pairs), "--output", str(queue)]) == 0
        out = capsys.readouterr().out
        assert "opening\tbottle\topen" in out
        assert "UNMAPPED" in out
        assert queue.read_text() == "juggling bottle\n"

    def test_usage_error_exits_two(self):
        """Test that a missing required flag is a usage error."""
        with pytest.raises(SystemExit) as excinfo:
            main(["dataset", "validate"])
        assert excinfo.value.code == 2


class TestTrainEvalExport:
    """Test the train → eval → export flow on a tiny config."""

    def test_train_writes_checkpoint_and_log(self, synth_dir, tiny_config, tmp_path):
        out = tmp_path / "run"
        args = ["--config", str(tiny_config), "train", "--manifest", str(synth_dir / "manifest.tsv"), "--out", str(out)]
        assert main(args) == 0
        assert (out / "model.a3dw").is_file()
        assert (out / "run_config.yaml").is_file()
        log = (out / "loss_log.tsv").read_text()
        hash_line = (out / "run_config.yaml").read_text().splitlines()[0]
        assert hash_line.split(": ")[1] in log.splitlines()[0]

    def test_rerun_gives_identical_log(self, synth_dir, tiny_config, tmp_path):
        logs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main(["--config", str(tiny_config), "train", "--manifest", str(synth_dir / "manifest.tsv"), "--out", str(out)]) == 0
            logs.append((out / "loss_log.tsv").read_bytes())
        assert logs[0] == logs[1]

    @pytest.mark.parametrize("frames", ["2", "4", "8", "16"])
    def test_frames_flag(self, synth_dir, tiny_config, tmp_path, frames):
        out = tmp_path / f"f{frames}"
        args = ["--config", str(tiny_config), "train", "--manifest", str(synth_dir / "manifest.tsv"),
                "--frames", frames, "--max-steps", "2", "--out", str(out)]
        assert main(args) == 0

    def test_unsupported_frames_is_usage_error(self, tiny_config):
        with pytest.raises(SystemExit) as excinfo:
            main(["--config", str(tiny_config), "train", "--frames", "3"])
        assert excinfo.value.code == 2

    def test_eval_oracle_is_ideal(self, synth_dir, tiny_config, tmp_path):
        """Test the oracle report: mIoU = SIM = AUC = 1, MAE = 0."""
        out = tmp_path / "oracle"
        args = ["--config", str(tiny_config), "eval", "--manifest", str(synth_dir / "manifest.tsv"),
                "--oracle", "--split-label", "unseen", "--out", str(out)]
        assert main(args) == 0
        kv = (out / "report.kv").read_text().splitlines()
        assert "split=unseen" in kv[0]
        overall = dict(field.split("=", 1) for field in kv[-1].split())
        assert float(overall["miou"]) == 1.0
        assert float(overall["auc"]) == 1.0
        assert math.isclose(float(overall["sim"]), 1.0, abs_tol=1e-12)
        assert float(overall["mae"]) == 0.0

    def test_eval_and_export_after_training(self, synth_dir, tiny_config, tmp_path):
        out = tmp_path / "run"
        manifest = str(synth_dir / "manifest.tsv")
        assert main(["--config", str(tiny_config), "train", "--manifest", manifest, "--out", str(out)]) == 0
        assert main(["--config", str(tiny_config), "eval", "--manifest", manifest, "--out", str(out)]) == 0
        assert (out / "report.txt").is_file()

        assert main(["--config", str(tiny_config), "export", "--manifest", manifest, "--video-id", "grasp-000", "--out", str(out)]) == 0
        coords, colors, values, comments = read_heatmap_ply(out / "heatmap.ply")
        assert coords.shape == (64, 3)
        assert np.all((values > 0) & (values < 1))
        assert any(c.startswith("afford3d config_hash=") for c in comments)
        assert "affordance=grasp" in comments

    def test_eval_missing_checkpoint(self, synth_dir, tiny_config, tmp_path):
        args = ["--config", str(tiny_config), "eval", "--manifest", str(synth_dir / "manifest.tsv"), "--out", str(tmp_path / "empty")]
        assert main(args) == 1

    def test_export_needs_a_sample(self, tiny_config, tmp_path):
        out = tmp_path / "run"
        out.mkdir()
        ModelParams.initialize(load_run_config(str(tiny_config)).model).save(out / "model.a3dw")
        assert main(["--config", str(tiny_config), "export", "--out", str(out)]) == 2

    def test_bad_config_exits_two(self, tmp_path):
        bad = tmp_path / "bad.yaml"
        bad.write_text("model:\n  frames: 3\n")
        assert main(["--config", str(bad), "train"]) == 2


class TestGradcheckAndWeights:
    """Test gradcheck and weights."""

    def test_gradcheck_passes(self, tmp_path, capsys):
        """Test one subsampled random cloud at 1e-5 with every tensor listed."""
        out = tmp_path / "gc"
        assert main(["gradcheck", "--samples", "1", "--coords-per-tensor", "4", "--out", str(out)]) == 0
        report = (out / "gradcheck.txt").read_text()
        for name in ("patch.w1", "fusion.query", "decoder.mlp_b2"):
            assert name in report
        assert "1/1 samples passed" in capsys.readouterr().out

    def test_single_point_weight(self, tmp_path):
        cloud = tmp_path / "one.pc"
        save_cloud(cloud, PointCloud(coords=[[0.3, 0.2, 0.1]]))
        out = tmp_path / "w.txt"
        assert main(["weights", "--cloud", str(cloud), "--output", str(out)]) == 0
        assert out.read_text().splitlines()[1] == "0 1.0"

    def test_two_point_weights(self, tmp_path):
        """Test ω = exp(−12.5) for d = 0.05, R_p = 0.1, σ = 0.01."""
        cloud = tmp_path / "two.pc"
        save_cloud(cloud, PointCloud(coords=[[0.0, 0.0, 0.0], [0.05, 0.0, 0.0]]))
        out = tmp_path / "w.txt"
        ply = tmp_path / "w.ply"
        args = ["weights", "--cloud", str(cloud), "--radius", "0.1", "--sigma", "0.01", "--output", str(out), "--ply", str(ply)]
        assert main(args) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("#afford3d-weights v1 config_hash=")
        for line in lines[1:]:
            assert float(line.split()[1]) == pytest.approx(3.727e-6, rel=1e-3)
        _, _, omega, _ = read_heatmap_ply(ply, value_name="omega")
        assert omega.shape == (2,)


class TestExperimentCommands:
    """Test ablate and sweep-frames on a tiny config."""

    def test_ablate_writes_every_run(self, synth_dir, tiny_config, tmp_path, capsys):
        out = tmp_path / "ablation"
        args = ["--config", str(tiny_config), "--seed", "5", "ablate", "--manifest",
                str(synth_dir / "manifest.tsv"), "--seeds", "2", "--max-steps", "2", "--out", str(out)]
        assert main(args) == 0
        lines = (out / "ablation.kv").read_text().splitlines()
        assert lines[0].startswith("#afford3d-ablation v1 ")
        assert "seeds=2" in lines[0]
        assert len(lines) == 1 + 4 * 2
        assert {line.split()[1] for line in lines[1:]} == {"seed=5", "seed=6"}
        assert "/2 seeds" in capsys.readouterr().out

    def test_sweep_frames_valid(self, synth_dir, tiny_config, tmp_path):
        out = tmp_path / "frames"
        args = ["--config", str(tiny_config), "sweep-frames", "--manifest", str(synth_dir / "manifest.tsv"),
                "--sweep", "2", "4", "--max-steps", "2", "--out", str(out)]
        assert main(args) == 0
        lines = (out / "frame_sweep.kv").read_text().splitlines()
        assert lines[0].endswith("valid=true")
        assert [line.split()[0] for line in lines[1:]] == ["run=F=2", "run=F=4"]

    def test_sweep_frames_rejects_unsupported(self, synth_dir, tiny_config):
        args = ["--config", str(tiny_config), "sweep-frames", "--manifest", str(synth_dir / "manifest.tsv"),
                "--sweep", "3"]
        assert main(args) == 2
