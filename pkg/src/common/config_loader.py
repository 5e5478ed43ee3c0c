"""Configuration loader for afford3d.

Loads YAML run-configuration files and caches the parsed documents.
"""

import yaml
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from src.common.exceptions import ConfigurationError

logger = logging.getLogger(__name__)


class ConfigLoader:
    """Loads and caches YAML configuration files."""

    def __init__(self, config_dir: Optional[str] = None):
        """
        Initialize ConfigLoader.

        Args:
            config_dir: Path to configuration directory (defaults to src/config)
        """
        if config_dir is None:
            self.config_dir = Path(__file__).parents[1] / "config"
        else:
            self.config_dir = Path(config_dir)

        self._cache: Dict[str, Any] = {}

    def resolve(self, name_or_path: str) -> Path:
        """
        Resolve a bare preset name (e.g. "default_run") or an explicit path.

        Args:
            name_or_path: Preset name inside the config directory, or a file path

        Returns:
            Path to the YAML file
        """
        candidate = Path(name_or_path)
        if candidate.suffix in (".yaml", ".yml") or candidate.exists():
            return candidate
        return self.config_dir / f"{name_or_path}.yaml"

    def load_yaml(self, name_or_path: str) -> Dict[str, Any]:
        """
        Load a YAML mapping.

        Args:
            name_or_path: Preset name or path

        Returns:
            Parsed mapping (empty dict for an empty file)

        Raises:
            ConfigurationError: If file not found, invalid YAML, or not a mapping
        """
        file_path = self.resolve(name_or_path)
        cache_key = str(file_path.resolve())
        if cache_key in self._cache:
            return self._cache[cache_key]

        try:
            with open(file_path, "r") as f:
                config = yaml.safe_load(f)
        except FileNotFoundError:
            raise ConfigurationError(f"Configuration file not found: {file_path}")
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Invalid YAML syntax in {file_path}: {e}")

        if config is None:
            config = {}
        if not isinstance(config, dict):
            raise ConfigurationError(
                f"Configuration file {file_path} must contain a mapping, "
                f"got {type(config).__name__}"
            )

        self._cache[cache_key] = config
        logger.debug(f"Loaded configuration from {file_path}")
        return config

    def clear_cache(self) -> None:
        """Clear all cached configuration files."""
        self._cache.clear()
        logger.debug("Configuration cache cleared")
