"""Shared infrastructure: exceptions, settings, configuration loading, logging."""

from src.common.exceptions import (
    Afford3DError,
    InvalidInputError,
    ParameterError,
    ShapeError,
    NumericDomainError,
    FormatError,
    TaxonomyError,
    MissingReferenceError,
    DatasetError,
    UndefinedMetricError,
    ConfigurationError,
    UsageError,
)
from src.common.config import Config
from src.common.config_loader import ConfigLoader
from src.common.logging_config import configure_logging

__all__ = [
    "Afford3DError",
    "InvalidInputError",
    "ParameterError",
    "ShapeError",
    "NumericDomainError",
    "FormatError",
    "TaxonomyError",
    "MissingReferenceError",
    "DatasetError",
    "UndefinedMetricError",
    "ConfigurationError",
    "UsageError",
    "Config",
    "ConfigLoader",
    "configure_logging",
]
