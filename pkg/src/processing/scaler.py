"""Median/IQR robust scaling of feature matrices."""

from typing import Sequence

import numpy as np

from ..config.constants import QUANTILE_HIGH, QUANTILE_LOW, SCALE_FLOOR
from ..exceptions import DataValidationError, ModelError
from ..models.timeseries import ScalerParams


def fit_robust_scaler(features: np.ndarray, feature_names: Sequence[str] = ()) -> ScalerParams:
    """
    Fit per-column median and interquartile range.

    Quantiles use linear interpolation; an IQR below 1e-12 becomes 1.0 so
    constant columns pass through centered but unscaled.

    Raises:
        DataValidationError: Empty matrix, fewer than 2 rows, or NaN/Inf values
    """
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.size == 0:
        raise DataValidationError(f"Scaler needs a non-empty 2-D matrix, got shape {features.shape}")
    if features.shape[0] < 2:
        raise DataValidationError(f"Scaler needs at least 2 rows, got {features.shape[0]}")
    if not np.all(np.isfinite(features)):
        raise DataValidationError("Scaler input contains NaN or Inf")

    center = np.median(features, axis=0)
    q1, q3 = np.percentile(features, [QUANTILE_LOW, QUANTILE_HIGH], axis=0)
    scale = q3 - q1
    scale = np.where(scale < SCALE_FLOOR, 1.0, scale)
    return ScalerParams(center=center, scale=scale, feature_names=tuple(feature_names))


def _check_columns(params: ScalerParams, matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=float)
    columns = matrix.shape[-1] if matrix.ndim else 0
    if matrix.ndim not in (1, 2) or columns != params.center.size:
        raise ModelError(
            f"Scaler expects {params.center.size} columns, got matrix of shape {matrix.shape}"
        )
    return matrix


def apply_scaler(params: ScalerParams, features: np.ndarray) -> np.ndarray:
    """(x - center) / scale per column."""
    features = _check_columns(params, features)
    return (features - params.center) / params.scale


def invert_scaler(params: ScalerParams, scaled: np.ndarray) -> np.ndarray:
    """scaled * scale + center per column."""
    scaled = _check_columns(params, scaled)
    return scaled * params.scale + params.center
