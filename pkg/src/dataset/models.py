"""Pydantic models for the dataset module."""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

SPLITS = ("train", "test")
ANY_OBJECT = "*"


class ManifestEntry(BaseModel):
    """One video ↔ point-cloud ↔ affordance record with its split assignment."""

    model_config = ConfigDict(frozen=True)

    video_id: str = Field(..., min_length=1)
    embedding_source: str = Field(..., min_length=1, description="File path or 'synth:<seed>'")
    object_class: str = Field(..., min_length=1)
    affordance_type: str = Field(..., min_length=1)
    point_cloud_path: str = Field(..., min_length=1)
    split: Literal["train", "test"]

    @field_validator("video_id", "embedding_source", "object_class", "affordance_type", "point_cloud_path")
    @classmethod
    def validate_field(cls, value: str) -> str:
        """Fields are single tab-free tokens."""
        if value != value.strip() or "\t" in value or "\n" in value:
            raise ValueError(f"manifest fields must not contain tabs, newlines or edge whitespace: {value!r}")
        return value

    @property
    def pair(self) -> tuple[str, str]:
        return (self.object_class, self.affordance_type)

    def fields(self) -> list[str]:
        return [
            self.video_id,
            self.embedding_source,
            self.object_class,
            self.affordance_type,
            self.point_cloud_path,
            self.split,
        ]

    def with_split(self, split: str) -> "ManifestEntry":
        return self.model_copy(update={"split": split})


class Rule(BaseModel):
    """One action → affordance rule; object_class '*' matches any object."""

    model_config = ConfigDict(frozen=True)

    action_pattern: str = Field(..., min_length=1, description="fnmatch-style pattern, lower case")
    object_class: str = Field(..., min_length=1)
    affordance: str = Field(..., min_length=1)

    @property
    def key(self) -> tuple[str, str]:
        return (self.action_pattern, self.object_class)

    @property
    def is_generic(self) -> bool:
        return self.object_class == ANY_OBJECT


class Taxonomy(BaseModel):
    """Affordance types, object classes and the action rule table."""

    model_config = ConfigDict(frozen=True)

    affordances: tuple[str, ...]
    objects: tuple[str, ...]
    rules: tuple[Rule, ...] = ()

    def has_affordance(self, name: str) -> bool:
        return name in self.affordances

    def has_object(self, name: str) -> bool:
        return name in self.objects


class MappingResult(BaseModel):
    """Outcome of mapping an (action, object) pair; unmapped goes to manual review."""

    model_config = ConfigDict(frozen=True)

    action: str
    object_class: str
    affordance: Optional[str] = None
    rule: Optional[Rule] = None
    suggestion: Optional[str] = Field(None, description="Closest rule pattern for the reviewer")

    @property
    def mapped(self) -> bool:
        return self.affordance is not None


class SplitSpec(BaseModel):
    """How to assign train/test splits."""

    model_config = ConfigDict(extra="forbid")

    mode: Literal["seen", "unseen"] = "seen"
    seed: int = Field(default=0, ge=0)
    test_fraction: float = Field(default=0.2, ge=0.0, lt=1.0, description="Seen mode: test share per pair")
    holdout_objects: list[str] = Field(default_factory=list)
    holdout_affordances: list[str] = Field(default_factory=list)


class PairingViolation(BaseModel):
    """One broken pairing rule."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["video_to_many_clouds", "cloud_to_many_videos", "duplicate_test_pair"]
    affordance_type: str
    subject: str = Field(..., description="The offending video id or cloud path")
    partners: tuple[str, ...] = ()

    def describe(self) -> str:
        partners = ", ".join(self.partners)
        if self.kind == "video_to_many_clouds":
            return f"test video {self.subject} ({self.affordance_type}) paired with clouds: {partners}"
        if self.kind == "cloud_to_many_videos":
            return f"test cloud {self.subject} ({self.affordance_type}) paired with videos: {partners}"
        return f"test pair {self.subject} ({self.affordance_type}) listed more than once"


class PairingReport(BaseModel):
    """Result of validate_pairing."""

    violations: list[PairingViolation] = Field(default_factory=list)
    train_entries: int = 0
    test_entries: int = 0

    @property
    def valid(self) -> bool:
        return not self.violations


class SynthConfig(BaseModel):
    """Synthetic dataset generator settings."""

    model_config = ConfigDict(extra="forbid")

    types: int = Field(default=2, ge=1, le=4, description="Affordance types to generate")
    samples_per_type: int = Field(default=5, ge=1)
    points: int = Field(default=512, ge=32, description="Points per cloud")
    noise: float = Field(default=0.005, ge=0.0, description="Gaussian coordinate noise")
    soft_boundary: float = Field(default=0.0, ge=0.0, description="Gaussian label falloff width (0 = hard)")
    test_fraction: float = Field(default=0.2, ge=0.0, lt=1.0, description="Seen-mode test share")
    seed: int = Field(default=0, ge=0)
