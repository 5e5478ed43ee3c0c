"""Procedural desk-scale dataset: vessels with analytically labeled parts.

Every cloud is a capped cylinder with a handle, a lid, a spout and a base
ring. The part that matches the sample's affordance type is the ground
truth region; embedding seeds share an affordance prototype, so the
grounding task is learnable.
"""

import logging
import math
from collections import OrderedDict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from src.common.exceptions import ParameterError
from src.dataset.manifest import save_manifest
from src.dataset.models import ManifestEntry, Rule, SplitSpec, SynthConfig, Taxonomy
from src.dataset.splits import make_splits
from src.dataset.taxonomy import save_taxonomy
from src.geometry.cloud_io import save_cloud
from src.geometry.models import PointCloud
from src.geometry.spatial_index import SpatialIndex

logger = logging.getLogger(__name__)

# Affordance type → the vessel part it grounds to, in generation order
AFFORDANCE_PARTS: "OrderedDict[str, str]" = OrderedDict([
    ("grasp", "handle"),
    ("open", "lid"),
    ("pour", "spout"),
    ("lift", "base"),
])

# Share of the cloud per part; the body takes the remainder
PART_FRACTIONS: Dict[str, float] = {"handle": 0.20, "lid": 0.15, "spout": 0.12, "base": 0.12}

# Object class → (body radius, body height)
OBJECT_SHAPES: "OrderedDict[str, Tuple[float, float]]" = OrderedDict([
    ("mug", (0.45, 0.8)),
    ("kettle", (0.5, 0.7)),
    ("jug", (0.35, 1.0)),
])

SYNTH_RULES: Tuple[Tuple[str, str, str], ...] = (
    ("grasp*", "*", "grasp"),
    ("hold*", "*", "grasp"),
    ("open*", "*", "open"),
    ("unscrew*", "jug", "open"),
    ("pour*", "*", "pour"),
    ("fill*", "kettle", "pour"),
    ("lift*", "*", "lift"),
    ("raise*", "*", "lift"),
)


@dataclass(frozen=True)
class SynthResult:
    """Paths and entries written by synth_generate."""

    out_dir: Path
    manifest_path: Path
    taxonomy_path: Path
    entries: List[ManifestEntry]


def _part_counts(n: int) -> Dict[str, int]:
    counts = {part: int(round(frac * n)) for part, frac in PART_FRACTIONS.items()}
    counts["body"] = n - sum(counts.values())
    return counts


def _sample_parts(
    rng: np.random.Generator, radius: float, height: float, counts: Dict[str, int]
) -> Dict[str, np.ndarray]:
    """Surface samples of each part in the object's local frame."""
    parts: Dict[str, np.ndarray] = {}

    n = counts["body"]
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    z = rng.uniform(0.0, height, n)
    parts["body"] = np.column_stack([radius * np.cos(theta), radius * np.sin(theta), z])

    # Handle: half torus on the +x side
    n = counts["handle"]
    sweep = rng.uniform(-np.pi / 2, np.pi / 2, n)
    tube = rng.uniform(0.0, 2.0 * np.pi, n)
    major, minor = 0.3 * height, 0.04
    ring = major + minor * np.cos(tube)
    parts["handle"] = np.column_stack([
        radius + ring * np.cos(sweep),
        minor * np.sin(tube),
        0.5 * height + ring * np.sin(sweep),
    ])

    # Lid: raised disc on top
    n = counts["lid"]
    r = 0.8 * radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    parts["lid"] = np.column_stack([r * np.cos(phi), r * np.sin(phi), np.full(n, height + 0.05)])

    # Spout: tapering cone leaving the −x side upward
    n = counts["spout"]
    t = rng.uniform(0.0, 1.0, n)
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    axis = np.array([-np.sqrt(0.5), 0.0, np.sqrt(0.5)])
    side = np.array([0.0, 1.0, 0.0])
    normal = np.cross(axis, side)
    origin = np.array([-radius, 0.0, 0.7 * height])
    width = 0.08 - 0.05 * t
    parts["spout"] = (
        origin
        + (0.35 * t)[:, None] * axis
        + (width * np.cos(phi))[:, None] * side
        + (width * np.sin(phi))[:, None] * normal
    )

    # Base: flat ring under the body
    n = counts["base"]
    r = radius * np.sqrt(rng.uniform(0.25, 1.0, n))
    phi = rng.uniform(0.0, 2.0 * np.pi, n)
    parts["base"] = np.column_stack([r * np.cos(phi), r * np.sin(phi), np.full(n, -0.02)])
    return parts


def synth_cloud(
    affordance: str,
    object_class: str,
    config: SynthConfig,
    rng: np.random.Generator,
) -> PointCloud:
    """
    One labeled vessel cloud.

    Points of the affordance's part are labeled 1. With soft_boundary s > 0
    every other point gets exp(−d²/2s²), d its distance to the nearest part
    point.
    """
    radius, height = OBJECT_SHAPES[object_class]
    scale = rng.uniform(0.9, 1.1)
    parts = _sample_parts(rng, radius * scale, height * scale, _part_counts(config.points))

    target = AFFORDANCE_PARTS[affordance]
    names = ["body", *PART_FRACTIONS]
    coords = np.concatenate([parts[name] for name in names])
    labels = np.concatenate([np.full(len(parts[name]), 1.0 if name == target else 0.0) for name in names])

    angle = rng.uniform(0.0, 2.0 * np.pi)
    c, s = np.cos(angle), np.sin(angle)
    rotation = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    coords = coords @ rotation.T
    if config.noise > 0:
        coords = coords + config.noise * rng.normal(size=coords.shape)

    if config.soft_boundary > 0:
        inside = labels == 1.0
        index = SpatialIndex(coords[inside])
        for i in np.flatnonzero(~inside):
            nearest = index.nearest(coords[i], 1)
            d2 = float(nearest.sq_distances[0])
            labels[i] = math.exp(-d2 / (2.0 * config.soft_boundary ** 2))

    order = rng.permutation(len(coords))
    return PointCloud(coords=coords[order], labels=labels[order])


def synth_taxonomy(affordances: List[str]) -> Taxonomy:
    """Taxonomy of the generated dataset: the chosen types, all vessel classes, matching rules."""
    rules = tuple(
        Rule(action_pattern=p, object_class=o, affordance=a)
        for p, o, a in SYNTH_RULES
        if a in affordances
    )
    return Taxonomy(affordances=tuple(affordances), objects=tuple(OBJECT_SHAPES), rules=rules)


def synth_generate(config: SynthConfig, out_dir: Union[str, Path]) -> SynthResult:
    """
    Write a synthetic dataset: clouds/, taxonomy.txt and manifest.tsv.

    Objects cycle through the vessel classes per sample; each (type, sample)
    draws from its own seeded stream, so the output is bitwise reproducible.
    With test_fraction > 0 a seen split is applied.

    Raises:
        ParameterError: Fewer than 32 points or 1 sample, or an unknown type count
    """
    if config.points < 32:
        raise ParameterError(f"synthetic clouds need at least 32 points, got {config.points}")
    if config.samples_per_type < 1:
        raise ParameterError(f"need at least one sample per type, got {config.samples_per_type}")
    if not 1 <= config.types <= len(AFFORDANCE_PARTS):
        raise ParameterError(f"types must be in [1, {len(AFFORDANCE_PARTS)}], got {config.types}")

    out_dir = Path(out_dir)
    affordances = list(AFFORDANCE_PARTS)[: config.types]
    objects = list(OBJECT_SHAPES)

    entries: List[ManifestEntry] = []
    for t, affordance in enumerate(affordances):
        for s in range(config.samples_per_type):
            rng = np.random.default_rng([config.seed, t, s])
            object_class = objects[s % len(objects)]
            video_id = f"{affordance}-{s:03d}"
            cloud_path = f"clouds/{video_id}.pc"
            save_cloud(out_dir / cloud_path, synth_cloud(affordance, object_class, config, rng))
            entries.append(ManifestEntry(
                video_id=video_id,
                embedding_source=f"synth:{config.seed}",
                object_class=object_class,
                affordance_type=affordance,
                point_cloud_path=cloud_path,
                split="train",
            ))

    taxonomy = synth_taxonomy(affordances)
    if config.test_fraction > 0:
        entries = make_splits(
            entries, SplitSpec(mode="seen", seed=config.seed, test_fraction=config.test_fraction), taxonomy
        )

    taxonomy_path = save_taxonomy(out_dir / "taxonomy.txt", taxonomy)
    manifest_path = save_manifest(out_dir / "manifest.tsv", entries, taxonomy_ref="taxonomy.txt")
    logger.info(
        f"Generated {len(entries)} synthetic samples ({config.types} types × "
        f"{config.samples_per_type}) in {out_dir}"
    )
    return SynthResult(
        out_dir=out_dir, manifest_path=manifest_path, taxonomy_path=taxonomy_path, entries=entries
    )
