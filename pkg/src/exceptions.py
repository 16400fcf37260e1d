"""
Custom exceptions for the TSKAN tool.

This module defines a hierarchy of exceptions for different error scenarios:
- TskanError: Base exception for all TSKAN errors
- ConfigError: Invalid or missing run configuration
- DataValidationError: Dataset files that do not match the expected schema
- ModelError: Invalid model parameters or dimension mismatches
- SplineGridError: Malformed spline knot grids
- TrainingError: Optimisation failures (diverging loss)
- BaselineFitError: Linear baselines that cannot be fitted
- ExportError: Artifacts that cannot be written

All exceptions inherit from TskanError for consistent error handling.
"""

from pathlib import Path


class TskanError(Exception):
    """Base exception for TSKAN errors."""
    pass


class ConfigError(TskanError):
    """Raised when the run configuration is invalid."""
    pass


class DataValidationError(TskanError):
    """Raised when dataset input fails validation."""
    pass


class ModelError(TskanError):
    """Raised when a model is invalid or receives mismatched inputs."""
    pass


class SplineGridError(ModelError):
    """Raised when a spline knot grid is malformed."""
    pass


class BaselineFitError(ModelError):
    """Raised when a linear baseline cannot be fitted."""
    pass


class TrainingError(TskanError):
    """Raised when training diverges."""

    def __init__(self, message: str, epoch: int | None = None) -> None:
        super().__init__(message)
        self.epoch = epoch


class ExportError(TskanError):
    """Raised when an artifact cannot be written."""

    def __init__(self, message: str, path: Path | None = None) -> None:
        super().__init__(message)
        self.path = path
