"""CLI entry point for afford3d."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from src.cli.heatmap import write_heatmap_ply
from src.common.config import Config
from src.common.exceptions import Afford3DError, InvalidInputError, UsageError
from src.common.logging_config import configure_logging
from src.dataset.manifest import entry_to_sample, load_manifest, save_manifest
from src.dataset.models import SplitSpec, SynthConfig
from src.dataset.pairing import validate_pairing
from src.dataset.splits import make_splits
from src.dataset.synth import AFFORDANCE_PARTS, OBJECT_SHAPES, synth_cloud, synth_generate
from src.dataset.taxonomy import load_taxonomy, map_actions, parse_action_pairs
from src.experiments.run_config import RunConfig, load_run_config, write_resolved
from src.experiments.runner import open_dataset, run_ablation, run_frame_sweep, write_lines
from src.geometry.cloud_io import load_cloud
from src.geometry.normalization import normalize_cloud
from src.losses.spatial import spatial_weights
from src.metrics.evaluation import evaluate
from src.metrics.report import format_table, write_report
from src.model.models import SUPPORTED_FRAMES, EmbeddingSource, ModelParams
from src.model.pipeline import ModelSample, forward
from src.trainer.training import gradient_check, train

logger = logging.getLogger(__name__)

EPILOG = """
Examples:
  # Generate a small synthetic dataset
  afford3d dataset synth --types 2 --samples 5 --seed 7 --out data/synth

  # Check pairing rules, then hold out one object class
  afford3d dataset validate --manifest data/synth/manifest.tsv
  afford3d dataset split --manifest data/synth/manifest.tsv --mode unseen --holdout mug

  # Train, evaluate and export a heatmap
  afford3d --config overfit_run train --manifest data/synth/manifest.tsv --out runs/overfit
  afford3d eval --manifest data/synth/manifest.tsv --out runs/overfit
  afford3d export --manifest data/synth/manifest.tsv --video-id grasp-000 --out runs/overfit

  # Finite-difference gradient check on 100 random 64-point clouds
  afford3d gradcheck --samples 100
"""


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    """Flags accepted both before and after the subcommand."""
    default = argparse.SUPPRESS if suppress else None
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--config", "-c", default=default, help="Run config preset name or YAML path")
    flags.add_argument("--seed", type=int, default=default, help="Master seed (overrides the config)")
    flags.add_argument("--out", "-o", default=default, help="Output directory (overrides the config)")
    flags.add_argument(
        "--verbose", "-v", action="store_true", default=argparse.SUPPRESS if suppress else False,
        help="Debug logging",
    )
    return flags


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afford3d",
        description="Ground affordance regions on 3D point clouds from demonstration embeddings",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
        parents=[_global_flags(suppress=False)],
    )
    common = _global_flags(suppress=True)
    commands = parser.add_subparsers(dest="command", required=True)

    dataset = commands.add_parser("dataset", help="Manifest tooling", parents=[common])
    dataset_commands = dataset.add_subparsers(dest="dataset_command", required=True)

    p = dataset_commands.add_parser("validate", help="Check references and pairing rules", parents=[common])
    p.add_argument("--manifest", "-m", type=Path, required=True)
    p.add_argument("--taxonomy", type=Path, help="Taxonomy overriding the manifest's own")
    p.set_defaults(handler=cmd_dataset_validate)

    p = dataset_commands.add_parser("split", help="Assign seen/unseen splits", parents=[common])
    p.add_argument("--manifest", "-m", type=Path, required=True)
    p.add_argument("--taxonomy", type=Path)
    p.add_argument("--mode", choices=["seen", "unseen"], default="seen")
    p.add_argument("--holdout", action="append", default=[], help="Held-out object class (repeatable)")
    p.add_argument("--holdout-affordance", action="append", default=[], help="Held-out affordance type (repeatable)")
    p.add_argument("--test-fraction", type=float, default=0.2, help="Seen mode: test share per pair")
    p.add_argument("--output", type=Path, help="Write here instead of rewriting the manifest")
    p.set_defaults(handler=cmd_dataset_split)

    p = dataset_commands.add_parser("synth", help="Generate a synthetic dataset", parents=[common])
    p.add_argument("--types", type=int, default=2, help=f"Affordance types (1-{len(AFFORDANCE_PARTS)})")
    p.add_argument("--samples", type=int, default=5, help="Samples per type")
    p.add_argument("--points", type=int, default=512, help="Points per cloud")
    p.add_argument("--noise", type=float, default=0.005)
    p.add_argument("--soft-boundary", type=float, default=0.0, help="Gaussian label falloff width")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.set_defaults(handler=cmd_dataset_synth)

    p = dataset_commands.add_parser("map", help="Map 'action object' pairs through the rule table", parents=[common])
    p.add_argument("--pairs", type=Path, required=True, help="File of 'action object_class' lines")
    p.add_argument("--taxonomy", type=Path, help="Taxonomy file (default: packaged)")
    p.add_argument("--output", type=Path, help="Write unmapped pairs here for manual review")
    p.set_defaults(handler=cmd_dataset_map)

    p = commands.add_parser("train", help="Train on a manifest's train split", parents=[common])
    _model_flags(p)
    p.set_defaults(handler=cmd_train)

    p = commands.add_parser("eval", help="Evaluate a checkpoint on a split", parents=[common])
    _model_flags(p)
    p.add_argument("--checkpoint", type=Path, help="Default: <out>/model.a3dw")
    p.add_argument("--split-label", choices=["seen", "unseen"], help="Label written on the report")
    p.add_argument("--split", choices=["train", "test"], help="Manifest split to score")
    p.add_argument("--oracle", action="store_true", help="Score with the labels themselves (metric plumbing check)")
    p.set_defaults(handler=cmd_eval)

    p = commands.add_parser("gradcheck", help="Finite-difference gradient check", parents=[common])
    p.add_argument("--samples", type=int, default=1, help="Random clouds to check")
    p.add_argument("--points", type=int, default=64, help="Points per random cloud")
    p.add_argument("--tolerance", type=float, default=1e-5)
    p.add_argument("--coords-per-tensor", type=int, help="Subsample coordinates per tensor")
    p.set_defaults(handler=cmd_gradcheck)

    p = commands.add_parser("export", help="Write a probability heatmap PLY", parents=[common])
    _model_flags(p)
    p.add_argument("--checkpoint", type=Path, help="Default: <out>/model.a3dw")
    p.add_argument("--video-id", help="Manifest entry to export")
    p.add_argument("--affordance", help="Affordance type (disambiguates the entry, or labels --cloud)")
    p.add_argument("--cloud", type=Path, help="Point-cloud file instead of a manifest entry")
    p.add_argument("--embedding", default="synth:0", help="Embedding source for --cloud")
    p.add_argument("--output", type=Path, help="Default: <out>/heatmap.ply")
    p.set_defaults(handler=cmd_export)

    p = commands.add_parser("weights", help="Dump per-point spatial weights", parents=[common])
    p.add_argument("--cloud", type=Path, required=True)
    p.add_argument("--radius", type=float, help="R_p (default: loss.radius)")
    p.add_argument("--sigma", type=float, help="σ (default: loss.sigma_ratio · R_p)")
    p.add_argument("--normalize", action="store_true", help="Normalize the cloud first, as training does")
    p.add_argument("--output", type=Path, help="Default: <out>/weights.txt")
    p.add_argument("--ply", type=Path, help="Also write an ω heatmap PLY")
    p.set_defaults(handler=cmd_weights)

    p = commands.add_parser("ablate", help="Action-token × spatial-loss ablation", parents=[common])
    _model_flags(p)
    p.add_argument("--seeds", type=int, default=10, help="Number of seeds, starting at --seed")
    p.set_defaults(handler=cmd_ablate)

    p = commands.add_parser("sweep-frames", help="Train/evaluate per frame count", parents=[common])
    _model_flags(p)
    p.add_argument("--sweep", type=int, nargs="+", default=list(SUPPORTED_FRAMES), help="Frame counts")
    p.set_defaults(handler=cmd_sweep_frames)
    return parser


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--manifest", "-m", type=Path, help="Manifest (overrides data.manifest)")
    p.add_argument("--frames", type=int, choices=SUPPORTED_FRAMES, help="Sampled frames F")
    p.add_argument("--max-steps", type=int, help="Fixed step budget")
    p.add_argument("--lr", type=float, help="Peak learning rate")
    p.add_argument("--lambda-spatial", type=float, help="Spatial-loss weight")
    p.add_argument("--no-action-tokens", action="store_true", help="Drop latent action tokens from fusion")


def _run_config(args: argparse.Namespace, default_preset: Optional[str] = None) -> RunConfig:
    overrides: Dict[str, Any] = {"out": getattr(args, "out", None)}
    if hasattr(args, "frames"):
        overrides.update({
            "data.manifest": str(args.manifest) if args.manifest else None,
            "model.frames": args.frames,
            "train.max_steps": args.max_steps,
            "train.learning_rate": args.lr,
            "loss.lambda_spatial": args.lambda_spatial,
            "model.use_action_tokens": False if args.no_action_tokens else None,
        })
    if getattr(args, "split_label", None):
        overrides["data.split_label"] = args.split_label
    if getattr(args, "split", None):
        overrides["eval.split"] = args.split
    return load_run_config(getattr(args, "config", None) or default_preset, overrides, seed=getattr(args, "seed", None))


def cmd_dataset_validate(args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(args.taxonomy) if args.taxonomy else None
    manifest = load_manifest(args.manifest, taxonomy=taxonomy)
    report = validate_pairing(manifest.entries)
    for violation in report.violations:
        print(f"VIOLATION: {violation.describe()}")
    print(
        f"{args.manifest}: {report.train_entries} train, {report.test_entries} test, "
        f"{len(report.violations)} violation(s)"
    )
    return 0 if report.valid else 1


def cmd_dataset_split(args: argparse.Namespace) -> int:
    taxonomy = load_taxonomy(args.taxonomy) if args.taxonomy else None
    manifest = load_manifest(args.manifest, taxonomy=taxonomy)
    try:
        spec = SplitSpec(
            mode=args.mode,
            seed=getattr(args, "seed", None) or 0,
            test_fraction=args.test_fraction,
            holdout_objects=args.holdout,
            holdout_affordances=args.holdout_affordance,
        )
    except ValidationError as e:
        raise UsageError(f"invalid split flags: {e.errors()[0]['msg']}")
    entries = make_splits(manifest.entries, spec, manifest.taxonomy)
    output = args.output or args.manifest
    save_manifest(output, entries, taxonomy_ref=manifest.taxonomy_ref)
    train_count = sum(e.split == "train" for e in entries)
    print(f"{output}: {train_count} train, {len(entries) - train_count} test ({spec.mode})")
    return 0


def cmd_dataset_synth(args: argparse.Namespace) -> int:
    try:
        config = SynthConfig(
            types=args.types,
            samples_per_type=args.samples,
            points=args.points,
            noise=args.noise,
            soft_boundary=args.soft_boundary,
            test_fraction=args.test_fraction,
            seed=getattr(args, "seed", None) or 0,
        )
    except ValidationError as e:
        problems = "; ".join(f"{err['loc'][0]}: {err['msg']}" for err in e.errors())
        raise UsageError(f"invalid synthetic dataset flags: {problems}")
    result = synth_generate(config, getattr(args, "out", None) or "data/synth")
    print(f"Wrote {len(result.entries)} samples; manifest {result.manifest_path}")
    return 0


def cmd_dataset_map(args: argparse.Namespace) -> int:
    if not args.pairs.is_file():
        raise UsageError(f"pairs file not found: {args.pairs}")
    taxonomy = load_taxonomy(args.taxonomy)
    results = map_actions(parse_action_pairs(args.pairs.read_text(), str(args.pairs)), taxonomy)
    unmapped = []
    for r in results:
        if r.mapped:
            print(f"{r.action}\t{r.object_class}\t{r.affordance}\t({r.rule.action_pattern} {r.rule.object_class})")
        else:
            hint = f"suggest {r.suggestion}" if r.suggestion else "no suggestion"
            print(f"{r.action}\t{r.object_class}\tUNMAPPED\t({hint})")
            unmapped.append(f"{r.action} {r.object_class}")
    if args.output:
        args.output.parent.mkdir(parents=True, exist_ok=True)
        args.output.write_text("".join(f"{line}\n" for line in unmapped))
    print(f"{len(results) - len(unmapped)} mapped, {len(unmapped)} queued for manual review")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    config = _run_config(args)
    manifest = open_dataset(config)
    samples = [entry_to_sample(e, manifest.base_dir) for e in manifest.split("train")]
    result = train(
        samples, config.model, config.loss, config.train,
        out_dir=config.out_dir, config_hash=config.config_hash(),
    )
    write_resolved(config)
    final = result.log[-1]
    print(f"Trained {len(result.log)} steps; final total loss {final.total:.6f}")
    print(f"Checkpoint {result.checkpoint_path}; log {result.log_path}")
    return 0


def _checkpoint(args: argparse.Namespace, config: RunConfig) -> ModelParams:
    path = args.checkpoint or config.out_dir / "model.a3dw"
    return ModelParams.load(path, config.model)


def cmd_eval(args: argparse.Namespace) -> int:
    config = _run_config(args)
    manifest = open_dataset(config)
    params = None if args.oracle else _checkpoint(args, config)
    report = evaluate(
        manifest.entries,
        params,
        config.model,
        config.eval,
        split_label=config.data.split_label,
        base_dir=manifest.base_dir,
        oracle=args.oracle,
        config_hash=config.config_hash(),
    )
    write_report(report, config.out_dir)
    print(format_table(report), end="")
    return 0


def cmd_gradcheck(args: argparse.Namespace) -> int:
    config = _run_config(args, default_preset="gradcheck_run")
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    affordances = list(AFFORDANCE_PARTS)
    objects = list(OBJECT_SHAPES)
    shape = SynthConfig(points=args.points, test_fraction=0.0)

    lines: List[str] = [f"#afford3d-gradcheck v1 config_hash={config.config_hash()} tolerance={args.tolerance!r}"]
    failed = 0
    for i in range(args.samples):
        rng = np.random.default_rng([config.seed, i])
        affordance = affordances[i % len(affordances)]
        cloud = synth_cloud(affordance, objects[i % len(objects)], shape, rng)
        sample = ModelSample(
            cloud=cloud,
            embedding_source=EmbeddingSource(kind="synthetic", seed=config.seed + i),
            video_id=f"gradcheck-{i:03d}",
            affordance=affordance,
        )
        params = ModelParams.initialize(config.model, seed=config.model.init_seed + i)
        report = gradient_check(
            sample, config.model, config.loss, params,
            tolerance=args.tolerance, coords_per_tensor=args.coords_per_tensor, seed=config.seed + i,
        )
        lines.append(f"# sample {i} ({affordance})")
        lines.extend(report.lines())
        if not report.passed:
            failed += 1
            logger.warning(f"Sample {i}: {', '.join(report.failures)} above tolerance")

    lines.append(f"# {args.samples - failed}/{args.samples} samples passed")
    path = write_lines(lines, config.out_dir / "gradcheck.txt")
    print("\n".join(lines[-1:]) + f" (details in {path})")
    return 0 if failed == 0 else 1


def cmd_export(args: argparse.Namespace) -> int:
    config = _run_config(args)
    params = _checkpoint(args, config)
    if args.cloud is not None:
        sample = ModelSample(
            cloud=load_cloud(args.cloud),
            embedding_source=EmbeddingSource.parse(args.embedding),
            video_id=args.video_id or "",
            affordance=args.affordance or "",
            base_dir=args.cloud.parent,
        )
    elif args.video_id:
        manifest = open_dataset(config)
        matches = [
            e for e in manifest.entries
            if e.video_id == args.video_id and args.affordance in (None, e.affordance_type)
        ]
        if not matches:
            raise InvalidInputError(f"no manifest entry for video '{args.video_id}'")
        sample = entry_to_sample(matches[0], manifest.base_dir)
    else:
        raise UsageError("export needs --video-id (with a manifest) or --cloud")

    probabilities = forward(sample, params, config.model)
    output = args.output or config.out_dir / "heatmap.ply"
    write_heatmap_ply(
        output,
        sample.cloud.coords,
        probabilities,
        comments=[
            f"afford3d config_hash={config.config_hash()}",
            f"affordance={sample.affordance}",
            f"video_id={sample.video_id}",
        ],
    )
    print(f"Wrote {sample.cloud.n_points} vertices to {output}")
    return 0


def cmd_weights(args: argparse.Namespace) -> int:
    config = _run_config(args)
    cloud = load_cloud(args.cloud)
    if args.normalize:
        cloud = normalize_cloud(cloud)
    radius = args.radius if args.radius is not None else config.loss.radius
    sigma = args.sigma if args.sigma is not None else config.loss.sigma_ratio * radius
    weights = spatial_weights(cloud.coords, radius, sigma)

    lines = [f"#afford3d-weights v1 config_hash={config.config_hash()} radius={radius!r} sigma={sigma!r}"]
    lines.extend(f"{i} {float(w)!r}" for i, w in enumerate(weights.omega))
    output = args.output or config.out_dir / "weights.txt"
    write_lines(lines, output)
    if args.ply:
        write_heatmap_ply(
            args.ply, cloud.coords, weights.omega,
            comments=[f"afford3d config_hash={config.config_hash()}", f"radius={radius!r} sigma={sigma!r}"],
            value_name="omega",
        )
    print(f"Wrote {cloud.n_points} weights to {output} ({weights.empty_neighborhoods} isolated points)")
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    config = _run_config(args)
    seeds = list(range(config.seed, config.seed + args.seeds))
    report = run_ablation(config, seeds=seeds)
    path = write_lines(report.lines(), config.out_dir / "ablation.kv")
    print(f"Spatial loss held or improved mIoU on {report.spatial_wins()}/{len(seeds)} seeds ({path})")
    return 0


def cmd_sweep_frames(args: argparse.Namespace) -> int:
    config = _run_config(args)
    unsupported = [F for F in args.sweep if F not in SUPPORTED_FRAMES]
    if unsupported:
        raise UsageError(f"frame counts must be in {SUPPORTED_FRAMES}, got {unsupported}")
    report = run_frame_sweep(config, frames=args.sweep)
    path = write_lines(report.lines(), config.out_dir / "frame_sweep.kv")
    print(f"Frame sweep {'valid' if report.valid else 'INVALID'} ({path})")
    return 0 if report.valid else 1


def main(argv: Optional[List[str]] = None) -> int:
    """
    Run one afford3d command.

    Returns:
        0 on success, 1 on runtime or dataset failures, 2 on usage errors
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging("DEBUG" if args.verbose else Config.LOG_LEVEL)

    try:
        return args.handler(args)
    except Afford3DError as e:
        logger.error(e.message)
        print(f"Error: {e.message}", file=sys.stderr)
        return e.exit_code
    except Exception as e:
        logger.exception(f"Unexpected failure: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
