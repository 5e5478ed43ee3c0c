"""Reader and writer for the "#afford3d-manifest v1" dataset manifest.

Header line, an optional "#taxonomy <path>" line, then one tab-separated
entry per line: video_id, embedding_source, object_class, affordance_type,
point_cloud_path, split. Relative paths resolve against the manifest's
directory.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

from pydantic import ValidationError

from src.common.exceptions import FormatError, MissingReferenceError, TaxonomyError
from src.dataset.fuzzy_matcher import did_you_mean
from src.dataset.models import SPLITS, ManifestEntry, Taxonomy
from src.dataset.taxonomy import load_taxonomy
from src.geometry.cloud_io import load_cloud
from src.model.models import EmbeddingSource
from src.model.pipeline import ModelSample

logger = logging.getLogger(__name__)

MANIFEST_HEADER = "#afford3d-manifest v1"
TAXONOMY_DIRECTIVE = "#taxonomy "
FIELD_NAMES = (
    "video_id",
    "embedding_source",
    "object_class",
    "affordance_type",
    "point_cloud_path",
    "split",
)


@dataclass(frozen=True)
class Manifest:
    """A loaded manifest: entries, their taxonomy, and where they came from."""

    entries: List[ManifestEntry]
    taxonomy: Taxonomy
    taxonomy_ref: Optional[str] = None
    base_dir: Optional[Path] = None

    def split(self, name: str) -> List[ManifestEntry]:
        return [e for e in self.entries if e.split == name]


def format_manifest(entries: List[ManifestEntry], taxonomy_ref: Optional[str] = None) -> str:
    lines = [MANIFEST_HEADER]
    if taxonomy_ref is not None:
        lines.append(f"{TAXONOMY_DIRECTIVE}{taxonomy_ref}")
    lines.extend("\t".join(entry.fields()) for entry in entries)
    return "\n".join(lines) + "\n"


def save_manifest(
    path: Union[str, Path],
    entries: List[ManifestEntry],
    taxonomy_ref: Optional[str] = None,
) -> Path:
    """
    Write a manifest.

    Args:
        path: Destination file
        entries: Entries in output order
        taxonomy_ref: Taxonomy path recorded in the "#taxonomy" line, if any
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_manifest(entries, taxonomy_ref))
    logger.info(f"Wrote {len(entries)} manifest entries to {path}")
    return path


def parse_manifest(
    text: str, taxonomy: Taxonomy, source: str = "<string>"
) -> List[ManifestEntry]:
    """
    Parse manifest text against a taxonomy.

    The header and an optional taxonomy line are skipped here; callers that
    need the taxonomy reference use read_taxonomy_ref().

    Raises:
        FormatError: Bad header, wrong field count, unknown split, malformed field
        TaxonomyError: Object class or affordance type outside the taxonomy
    """
    lines = text.splitlines()
    if not lines or lines[0].strip() != MANIFEST_HEADER:
        raise FormatError(f"{source}:1: expected header '{MANIFEST_HEADER}'")

    entries: List[ManifestEntry] = []
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip() or raw.startswith("#"):
            continue
        fields = raw.split("\t")
        if len(fields) != len(FIELD_NAMES):
            raise FormatError(
                f"{source}:{line_no}: expected {len(FIELD_NAMES)} tab-separated fields, got {len(fields)}"
            )
        record = dict(zip(FIELD_NAMES, fields))
        if record["split"] not in SPLITS:
            raise FormatError(
                f"{source}:{line_no}: field 'split' must be one of {SPLITS}, got {record['split']!r}"
            )
        try:
            entry = ManifestEntry(**record)
        except ValidationError as e:
            field = e.errors()[0]["loc"][0] if e.errors() else "?"
            raise FormatError(f"{source}:{line_no}: invalid field '{field}': {e.errors()[0]['msg']}")

        if not taxonomy.has_affordance(entry.affordance_type):
            raise TaxonomyError(
                f"{source}:{line_no}: affordance type '{entry.affordance_type}' is not in the taxonomy"
                + did_you_mean(entry.affordance_type, taxonomy.affordances)
            )
        if not taxonomy.has_object(entry.object_class):
            raise TaxonomyError(
                f"{source}:{line_no}: object class '{entry.object_class}' is not in the taxonomy"
                + did_you_mean(entry.object_class, taxonomy.objects)
            )
        entries.append(entry)
    return entries


def read_taxonomy_ref(text: str) -> Optional[str]:
    """The path named by a "#taxonomy" line on line 2, if present."""
    lines = text.splitlines()
    if len(lines) >= 2 and lines[1].startswith(TAXONOMY_DIRECTIVE):
        return lines[1][len(TAXONOMY_DIRECTIVE):].strip()
    return None


def resolve_path(path: str, base_dir: Optional[Path]) -> Path:
    candidate = Path(path)
    if not candidate.is_absolute() and base_dir is not None:
        candidate = base_dir / candidate
    return candidate


def check_references(entries: List[ManifestEntry], base_dir: Optional[Path], source: str = "") -> None:
    """
    Verify that every point-cloud and embedding file an entry names exists.

    Raises:
        MissingReferenceError: Naming the first missing file and its entry
    """
    for position, entry in enumerate(entries, start=1):
        cloud = resolve_path(entry.point_cloud_path, base_dir)
        if not cloud.is_file():
            raise MissingReferenceError(
                f"{source}entry {position} ({entry.video_id}): point cloud not found: {cloud}"
            )
        embedding = EmbeddingSource.parse(entry.embedding_source)
        if embedding.kind == "file":
            path = resolve_path(embedding.path, base_dir)
            if not path.is_file():
                raise MissingReferenceError(
                    f"{source}entry {position} ({entry.video_id}): embedding file not found: {path}"
                )


def load_manifest(
    path: Union[str, Path],
    taxonomy: Optional[Taxonomy] = None,
    verify_files: bool = True,
) -> Manifest:
    """
    Load and validate a manifest.

    The taxonomy is, in order of precedence: the argument, the file named by
    the manifest's "#taxonomy" line, the packaged default.

    Args:
        path: Manifest file
        taxonomy: Taxonomy overriding the manifest's own reference
        verify_files: Check that referenced clouds and embedding files exist

    Returns:
        Manifest with entries in file order

    Raises:
        MissingReferenceError: Manifest, taxonomy, or referenced file missing
        FormatError: Malformed manifest
        TaxonomyError: Entry outside the taxonomy
    """
    path = Path(path)
    if not path.is_file():
        raise MissingReferenceError(f"manifest not found: {path}")
    text = path.read_text()
    base_dir = path.parent

    taxonomy_ref = read_taxonomy_ref(text)
    if taxonomy is None:
        taxonomy = load_taxonomy(resolve_path(taxonomy_ref, base_dir) if taxonomy_ref else None)

    entries = parse_manifest(text, taxonomy, source=str(path))
    if not entries:
        logger.warning(f"Manifest {path} has no entries")
    if verify_files:
        check_references(entries, base_dir, source=f"{path}: ")

    logger.info(
        f"Loaded manifest {path}: {len(entries)} entries "
        f"({sum(e.split == 'train' for e in entries)} train, {sum(e.split == 'test' for e in entries)} test)"
    )
    return Manifest(entries=entries, taxonomy=taxonomy, taxonomy_ref=taxonomy_ref, base_dir=base_dir)


def entry_to_sample(entry: ManifestEntry, base_dir: Optional[Path] = None) -> ModelSample:
    """Load an entry's point cloud and bind its embedding source."""
    cloud = load_cloud(resolve_path(entry.point_cloud_path, base_dir))
    return ModelSample(
        cloud=cloud,
        embedding_source=EmbeddingSource.parse(entry.embedding_source),
        video_id=entry.video_id,
        affordance=entry.affordance_type,
        base_dir=base_dir,
    )
