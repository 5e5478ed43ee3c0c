"""Run configuration: YAML file plus command-line overrides, hashed for provenance."""

import copy
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.common.config_loader import ConfigLoader
from src.common.exceptions import ConfigurationError
from src.losses.models import LossConfig
from src.metrics.models import EvalConfig
from src.model.models import ModelConfig
from src.trainer.models import TrainConfig

logger = logging.getLogger(__name__)

DEFAULT_PRESET = "default_run"
RESOLVED_NAME = "run_config.yaml"

# Sub-seeds that follow the top-level seed unless set explicitly
SEEDED_FIELDS = (("model", "init_seed"), ("train", "seed"))


class DataConfig(BaseModel):
    """Dataset locations and labels."""

    model_config = ConfigDict(extra="forbid")

    manifest: Optional[str] = Field(None, description="Manifest path")
    taxonomy: Optional[str] = Field(None, description="Taxonomy overriding the manifest's own")
    split_label: str = Field(default="seen", description="Label written on evaluation reports")


class RunConfig(BaseModel):
    """Everything that determines a run's outputs."""

    model_config = ConfigDict(extra="forbid")

    model: ModelConfig = Field(default_factory=ModelConfig)
    loss: LossConfig = Field(default_factory=LossConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    eval: EvalConfig = Field(default_factory=EvalConfig)
    data: DataConfig = Field(default_factory=DataConfig)
    seed: int = 0
    out: str = "runs/default"

    def config_hash(self) -> str:
        """First 16 hex digits of SHA-256 over the sorted-key JSON dump."""
        canonical = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]

    @property
    def out_dir(self) -> Path:
        return Path(self.out)


def _set_dotted(data: Dict[str, Any], dotted: str, value: Any) -> None:
    node = data
    *parents, leaf = dotted.split(".")
    for key in parents:
        child = node.setdefault(key, {})
        if not isinstance(child, dict):
            raise ConfigurationError(f"cannot override '{dotted}': '{key}' is not a mapping")
        node = child
    node[leaf] = value


def build_run_config(
    document: Mapping[str, Any],
    overrides: Optional[Mapping[str, Any]] = None,
    seed: Optional[int] = None,
) -> RunConfig:
    """
    Validate a configuration mapping after applying overrides.

    Args:
        document: Parsed YAML mapping
        overrides: Dotted key → value (e.g. "model.frames": 4); None values are skipped
        seed: Top-level seed override; also forces the seeded sub-fields

    Raises:
        ConfigurationError: If the result does not validate
    """
    data = copy.deepcopy(dict(document))
    for dotted, value in (overrides or {}).items():
        if value is not None:
            _set_dotted(data, dotted, value)

    if seed is not None:
        data["seed"] = seed
    master = data.get("seed", 0)
    for block, key in SEEDED_FIELDS:
        section = data.setdefault(block, {})
        if not isinstance(section, dict):
            raise ConfigurationError(f"'{block}' must be a mapping")
        if seed is not None:
            section[key] = seed
        else:
            section.setdefault(key, master)

    try:
        return RunConfig(**data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise ConfigurationError(f"invalid run configuration: {problems}")


def load_run_config(
    name_or_path: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
    seed: Optional[int] = None,
    loader: Optional[ConfigLoader] = None,
) -> RunConfig:
    """
    Load a preset name or YAML path (the packaged default when None) and apply flags.

    Flags win over the file.
    """
    loader = loader or ConfigLoader()
    document = loader.load_yaml(name_or_path or DEFAULT_PRESET)
    config = build_run_config(document, overrides, seed)
    logger.debug(f"Run configuration {name_or_path or DEFAULT_PRESET} resolved to hash {config.config_hash()}")
    return config


def write_resolved(config: RunConfig, out_dir: Union[str, Path, None] = None) -> Path:
    """Write the fully resolved configuration (with its hash) next to the run's outputs."""
    out_dir = Path(out_dir) if out_dir is not None else config.out_dir
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / RESOLVED_NAME
    body = yaml.safe_dump(config.model_dump(mode="json"), sort_keys=True)
    path.write_text(f"# config_hash: {config.config_hash()}\n{body}")
    return path
