"""Interpretable linear baselines: ordinary least squares and LASSO."""

from typing import List, Sequence

import numpy as np
from loguru import logger

from ..config.constants import (
    BASELINE_FEATURE_MODES,
    DEFAULT_LASSO_MAX_ITER,
    DEFAULT_LASSO_TOL,
    OLS_RIDGE_JITTER,
)
from ..exceptions import BaselineFitError, ConfigError
from ..models.features import parse_feature_name
from ..models.linear import LinearModel


def _check_design(X: np.ndarray, y: np.ndarray):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.size:
        raise BaselineFitError(f"Design of shape {X.shape} does not match {y.size} targets")
    if y.size == 0:
        raise BaselineFitError("Cannot fit a baseline on an empty set")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise BaselineFitError("Baseline inputs must be finite")
    return X, y


def _names(feature_names: Sequence[str], n: int) -> tuple:
    return tuple(feature_names) if feature_names else tuple(f"x{j}" for j in range(n))


def fit_linear_regression(X: np.ndarray, y: np.ndarray, feature_names: Sequence[str] = ()) -> LinearModel:
    """
    Least squares with intercept via centred normal equations.

    A 1e-10 ridge jitter keeps the system solvable when columns are collinear
    or constant.

    Raises:
        BaselineFitError: Every column of X is constant
    """
    X, y = _check_design(X, y)
    x_mean, y_mean = X.mean(axis=0), float(y.mean())
    Xc, yc = X - x_mean, y - y_mean
    if X.shape[1] and not np.any(Xc.std(axis=0) > 0):
        raise BaselineFitError("Degenerate design: every feature column is constant")

    gram = Xc.T @ Xc + OLS_RIDGE_JITTER * np.eye(X.shape[1])
    weights = np.linalg.solve(gram, Xc.T @ yc) if X.shape[1] else np.zeros(0)
    intercept = y_mean - float(x_mean @ weights)
    return LinearModel(
        weights=weights,
        intercept=intercept,
        feature_names=_names(feature_names, X.shape[1]),
        fit_info={"method": "ols"},
    )


def soft_threshold(x, threshold: float):
    return np.sign(x) * np.maximum(np.abs(x) - threshold, 0.0)


def lasso_objective(Z: np.ndarray, y: np.ndarray, weights: np.ndarray, lam: float) -> float:
    """0.5 * ||y - Z w||^2 + lam * ||w||_1"""
    r = y - Z @ weights
    return 0.5 * float(r @ r) + lam * float(np.abs(weights).sum())


def fit_lasso(
    X: np.ndarray,
    y: np.ndarray,
    lam: float,
    tol: float = DEFAULT_LASSO_TOL,
    max_iter: int = DEFAULT_LASSO_MAX_ITER,
    feature_names: Sequence[str] = (),
    standardize: bool = True,
    fit_intercept: bool = True,
) -> LinearModel:
    """
    Cyclic coordinate descent with soft-thresholding.

    Minimises 0.5 * ||y - Zw - b||^2 + lam * ||w||_1 where Z is X centred and
    (by default) scaled to unit standard deviation; weights are mapped back
    to the original columns. Stops when the largest coefficient change of a
    sweep drops below tol. Hitting max_iter logs a warning and still returns
    the model, with fit_info['converged'] False.
    """
    if lam < 0:
        raise ConfigError(f"LASSO lambda must be >= 0, got {lam}")
    X, y = _check_design(X, y)
    n_features = X.shape[1]

    x_mean = X.mean(axis=0) if fit_intercept else np.zeros(n_features)
    y_mean = float(y.mean()) if fit_intercept else 0.0
    Z, yc = X - x_mean, y - y_mean
    scale = np.ones(n_features)
    if standardize:
        std = Z.std(axis=0)
        scale = np.where(std > 0, std, 1.0)
        Z = Z / scale
    col_sq = (Z * Z).sum(axis=0)

    weights = np.zeros(n_features)
    residual = yc.copy()
    objectives: List[float] = [lasso_objective(Z, yc, weights, lam)]
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        max_delta = 0.0
        for j in range(n_features):
            if col_sq[j] == 0:
                continue
            rho = float(Z[:, j] @ residual) + col_sq[j] * weights[j]
            new = float(soft_threshold(rho, lam)) / col_sq[j]
            delta = new - weights[j]
            if delta != 0.0:
                residual -= Z[:, j] * delta
                weights[j] = new
                max_delta = max(max_delta, abs(delta))
        objectives.append(lasso_objective(Z, yc, weights, lam))
        if max_delta < tol:
            converged = True
            break

    if not converged:
        logger.warning(f"LASSO did not converge in {max_iter} sweeps (lambda={lam})")

    original = weights / scale
    intercept = y_mean - float(x_mean @ original)
    return LinearModel(
        weights=original,
        intercept=intercept,
        feature_names=_names(feature_names, n_features),
        fit_info={
            "method": "lasso",
            "lambda": lam,
            "iterations": iterations,
            "converged": converged,
            "objective_history": objectives,
        },
    )


def baseline_columns(feature_names: Sequence[str], mode: str) -> List[int]:
    """Column indices a baseline uses: all features, or only M_v(0) per variable."""
    if mode not in BASELINE_FEATURE_MODES:
        raise ConfigError(f"Baseline feature mode must be one of {BASELINE_FEATURE_MODES}, got '{mode}'")
    if mode == "frequency":
        return list(range(len(feature_names)))
    return [j for j, name in enumerate(feature_names) if parse_feature_name(name).is_dc]
