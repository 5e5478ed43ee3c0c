"""Dataset Module - manifests, taxonomy rules, pairing checks, splits and synthetic data."""

from src.dataset.models import (
    ANY_OBJECT,
    SPLITS,
    ManifestEntry,
    Rule,
    Taxonomy,
    MappingResult,
    SplitSpec,
    PairingViolation,
    PairingReport,
    SynthConfig,
)
from src.dataset.fuzzy_matcher import FuzzyMatcher, did_you_mean
from src.dataset.taxonomy import (
    default_taxonomy_path,
    parse_taxonomy,
    format_taxonomy,
    load_taxonomy,
    save_taxonomy,
    map_action_to_affordance,
    map_actions,
    parse_action_pairs,
)
from src.dataset.manifest import (
    MANIFEST_HEADER,
    Manifest,
    format_manifest,
    save_manifest,
    parse_manifest,
    load_manifest,
    check_references,
    entry_to_sample,
)
from src.dataset.pairing import validate_pairing
from src.dataset.splits import make_splits
from src.dataset.synth import AFFORDANCE_PARTS, OBJECT_SHAPES, SynthResult, synth_cloud, synth_generate

__all__ = [
    "ANY_OBJECT",
    "SPLITS",
    "ManifestEntry",
    "Rule",
    "Taxonomy",
    "MappingResult",
    "SplitSpec",
    "PairingViolation",
    "PairingReport",
    "SynthConfig",
    "FuzzyMatcher",
    "did_you_mean",
    "default_taxonomy_path",
    "parse_taxonomy",
    "format_taxonomy",
    "load_taxonomy",
    "save_taxonomy",
    "map_action_to_affordance",
    "map_actions",
    "parse_action_pairs",
    "MANIFEST_HEADER",
    "Manifest",
    "format_manifest",
    "save_manifest",
    "parse_manifest",
    "load_manifest",
    "check_references",
    "entry_to_sample",
    "validate_pairing",
    "make_splits",
    "AFFORDANCE_PARTS",
    "OBJECT_SHAPES",
    "SynthResult",
    "synth_cloud",
    "synth_generate",
]
