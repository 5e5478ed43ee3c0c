"""Custom exceptions for afford3d.

Every error carries the process exit code the CLI reports for it.
"""


class Afford3DError(Exception):
    """Base exception for afford3d."""

    def __init__(self, message: str, exit_code: int = 1):
        self.message = message
        self.exit_code = exit_code
        super().__init__(message)


class InvalidInputError(Afford3DError):
    """Input data violates a documented precondition (e.g. non-finite coordinates)."""


class ParameterError(Afford3DError):
    """A numeric or count parameter is out of its admissible range."""


class ShapeError(Afford3DError):
    """Tensor or array extents do not agree."""


class NumericDomainError(Afford3DError):
    """A pointwise operation left its domain or overflowed."""


class FormatError(Afford3DError):
    """A file does not follow its declared format."""


class TaxonomyError(Afford3DError):
    """An affordance type or object class is not part of the taxonomy."""


class MissingReferenceError(Afford3DError):
    """A manifest entry references a file that does not exist."""


class DatasetError(Afford3DError):
    """A dataset split fails validation."""


class UndefinedMetricError(Afford3DError):
    """A metric is undefined for the given sample (e.g. single-class labels)."""


class ConfigurationError(Afford3DError):
    """Configuration files cannot be loaded or are invalid."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class UsageError(Afford3DError):
    """Command-line usage error."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)
