"""Model-agnostic prediction and RMSE evaluation."""

from functools import singledispatch

import numpy as np

from ..exceptions import DataValidationError, ModelError
from ..models.kan import KanModel
from ..models.linear import LinearModel
from ..models.pipeline import ModelBundle
from ..models.timeseries import Dataset
from .kan import forward_batch
from .scaler import apply_scaler
from .spectral import build_feature_matrix


@singledispatch
def predict(model, features: np.ndarray) -> np.ndarray:
    raise ModelError(f"Cannot predict with model of type {type(model).__name__}")


@predict.register
def _(model: KanModel, features: np.ndarray) -> np.ndarray:
    return forward_batch(model, features)


@predict.register
def _(model: LinearModel, features: np.ndarray) -> np.ndarray:
    features = np.asarray(features, dtype=float)
    if features.ndim != 2 or features.shape[1] != model.weights.size:
        raise ModelError(
            f"Linear model expects {model.weights.size} features, got input of shape {features.shape}"
        )
    return features @ model.weights + model.intercept


def evaluate_rmse(model, features: np.ndarray, targets: np.ndarray) -> float:
    """sqrt(mean((y_hat - y)^2)) on unscaled targets."""
    targets = np.asarray(targets, dtype=float)
    if targets.size == 0:
        raise ModelError("RMSE needs a non-empty evaluation set")
    residual = predict(model, features) - targets
    return float(np.sqrt(np.mean(residual * residual)))


def bundle_features(bundle: ModelBundle, ds: Dataset) -> np.ndarray:
    """
    Scaled model inputs for a dataset, following the bundle's feature schema.

    Raises:
        DataValidationError: Variables or session length differ from the schema
    """
    schema = bundle.schema
    if tuple(ds.variable_names) != tuple(schema.variables):
        missing = [v for v in schema.variables if v not in ds.variable_names]
        extra = [v for v in ds.variable_names if v not in schema.variables]
        raise DataValidationError(
            f"Dataset variables do not match the model schema: missing {missing}, unexpected {extra}, "
            f"expected order {list(schema.variables)}"
        )
    if ds.target_length != schema.T:
        raise DataValidationError(
            f"Model expects sessions of {schema.T} chunks, dataset has {ds.target_length or 'ragged lengths'}"
        )
    X, names = build_feature_matrix(ds, schema.F)
    missing = [n for n in bundle.model.input_names if n not in names]
    if missing:
        raise DataValidationError(f"Model inputs {missing} are not produced at F={schema.F}")
    columns = [names.index(n) for n in bundle.model.input_names]
    return apply_scaler(bundle.scaler.subset(bundle.model.input_names), X[:, columns])
