"""Two-stage TSKAN selection pipeline."""

from dataclasses import dataclass
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..exceptions import DataValidationError
from ..models.features import FeatureSchema
from ..models.kan import ImportanceReport, KanModel, TrainConfig, TrainHistory
from ..models.linear import LinearModel
from ..models.pipeline import PipelineConfig, PipelineResult, RmseMetrics
from ..models.run import BaselineConfig
from ..models.timeseries import Dataset, ScalerParams
from .baselines import baseline_columns, fit_lasso, fit_linear_regression
from .importance import importance_scores, select_top_k
from .kan import activation_outputs, build_design, init_model
from .predict import evaluate_rmse
from .scaler import apply_scaler, fit_robust_scaler
from .spectral import build_feature_matrix
from .splitting import split_indices
from .trainer import ProgressCallback, train

# (stage label, total epochs) -> per-epoch callback
StageProgress = Callable[[str, int], ProgressCallback]

__all__ = [
    "PreparedFeatures",
    "StageProgress",
    "evaluate_rmse",
    "prepare_features",
    "run_baselines",
    "run_full_pipeline",
    "run_stage1",
    "select_top_k",
]


@dataclass
class PreparedFeatures:
    """Scaled feature matrices of the three splits; targets stay in MOS units."""

    names: Tuple[str, ...]
    scaler: ScalerParams
    schema: FeatureSchema
    x_train: np.ndarray
    y_train: np.ndarray
    x_val: np.ndarray
    y_val: np.ndarray
    x_test: np.ndarray
    y_test: np.ndarray

    def columns(self, names: Sequence[str]) -> "PreparedFeatures":
        idx = [self.names.index(n) for n in names]
        return PreparedFeatures(
            names=tuple(names),
            scaler=self.scaler.subset(names),
            schema=self.schema,
            x_train=self.x_train[:, idx],
            y_train=self.y_train,
            x_val=self.x_val[:, idx],
            y_val=self.y_val,
            x_test=self.x_test[:, idx],
            y_test=self.y_test,
        )

    def rmse(self, model) -> RmseMetrics:
        return RmseMetrics(
            train=evaluate_rmse(model, self.x_train, self.y_train),
            val=evaluate_rmse(model, self.x_val, self.y_val),
            test=evaluate_rmse(model, self.x_test, self.y_test),
        )


def prepare_features(ds: Dataset, cfg: PipelineConfig) -> PreparedFeatures:
    """
    Frequency features at cutoff F, split, and robust-scaled on the train part.

    Raises:
        DataValidationError: Ragged sample lengths or too few samples
        ConfigError: k larger than the number of features
    """
    if ds.target_length is None:
        raise DataValidationError("Sample lengths differ; enforce a common length before building features")
    cfg.check_feature_count(len(ds.variable_names))
    X, names = build_feature_matrix(ds, cfg.F)
    y = ds.labels
    train_idx, val_idx, test_idx = split_indices(len(ds), cfg.split)
    logger.info(
        f"Built {X.shape[1]} frequency features (F={cfg.F}) for {len(ds)} samples; "
        f"split {train_idx.size}/{val_idx.size}/{test_idx.size}"
    )

    scaler = fit_robust_scaler(X[train_idx], names)
    scaled = apply_scaler(scaler, X)
    return PreparedFeatures(
        names=names,
        scaler=scaler,
        schema=FeatureSchema(F=cfg.F, variables=ds.variable_names, T=ds.target_length),
        x_train=scaled[train_idx],
        y_train=y[train_idx],
        x_val=scaled[val_idx],
        y_val=y[val_idx],
        x_test=scaled[test_idx],
        y_test=y[test_idx],
    )


def _fit(
    model: KanModel,
    data: PreparedFeatures,
    train_cfg: TrainConfig,
    label: str,
    stage_progress: Optional[StageProgress],
) -> Tuple[KanModel, TrainHistory]:
    callback = stage_progress(label, train_cfg.epochs) if stage_progress else None
    return train(model, (data.x_train, data.y_train), (data.x_val, data.y_val), train_cfg, progress=callback)


def _stage1(
    data: PreparedFeatures, cfg: PipelineConfig, stage_progress: Optional[StageProgress]
) -> Tuple[KanModel, TrainHistory, ImportanceReport]:
    logger.info(f"Stage 1: training on all {len(data.names)} features")
    model = init_model(data.names, data.x_train, data.y_train, cfg.stage1_train)
    model, history = _fit(model, data, cfg.stage1_train, "Stage 1", stage_progress)
    report = importance_scores(model, data.x_train)
    return model, history, report


def run_stage1(
    ds: Dataset, cfg: PipelineConfig, stage_progress: Optional[StageProgress] = None
) -> Tuple[KanModel, ImportanceReport]:
    """
    Train on every frequency feature and rank features by importance.

    Importance is measured on the training split only.
    """
    data = prepare_features(ds, cfg)
    model, _, report = _stage1(data, cfg, stage_progress)
    return model, report


def _pruned_model(stage1: KanModel, selected: Sequence[str], x_train: np.ndarray) -> KanModel:
    """Stage-1 activations of the selected features; the bias takes the dropped activations' mean output."""
    psi = activation_outputs(
        [a.coefficients for a in stage1.activations],
        np.array([a.base_weight for a in stage1.activations]),
        build_design(stage1, x_train),
    )
    dropped = [q for q, name in enumerate(stage1.input_names) if name not in selected]
    bias = stage1.output_bias + float(psi[:, dropped].mean(axis=0).sum()) if dropped else stage1.output_bias
    source = stage1.copy()
    return KanModel(activations=[source.activation(name) for name in selected], output_bias=bias)


def run_full_pipeline(
    ds: Dataset,
    cfg: PipelineConfig,
    stage_progress: Optional[StageProgress] = None,
    data: Optional[PreparedFeatures] = None,
) -> PipelineResult:
    """
    Stage 1, top-k selection, stage-2 retraining and RMSE on all splits.

    Stage 2 starts from a fresh initialisation by default; with
    stage2_init='prune' it continues from the stage-1 activations of the
    selected features. Pass data to reuse features already built by
    prepare_features(ds, cfg).
    """
    if data is None:
        data = prepare_features(ds, cfg)
    stage1_model, stage1_history, report = _stage1(data, cfg, stage_progress)
    stage1_metrics = data.rmse(stage1_model)
    selected = select_top_k(report, cfg.k)

    reduced = data.columns(selected)
    logger.info(f"Stage 2: retraining on {len(selected)} features ({cfg.stage2_init} start)")
    if cfg.stage2_init == "prune":
        start = _pruned_model(stage1_model, selected, data.x_train)
    else:
        start = init_model(reduced.names, reduced.x_train, reduced.y_train, cfg.stage2_train)
    final_model, stage2_history = _fit(start, reduced, cfg.stage2_train, "Stage 2", stage_progress)

    metrics = reduced.rmse(final_model)
    logger.info(
        f"RMSE train={metrics.train:.4f} val={metrics.val:.4f} test={metrics.test:.4f} "
        f"(stage 1 test={stage1_metrics.test:.4f})"
    )
    return PipelineResult(
        selected_features=tuple(selected),
        stage1_importance=report,
        final_model=final_model,
        metrics=metrics,
        scaler=data.scaler,
        schema=data.schema,
        config=cfg,
        stage1_metrics=stage1_metrics,
        stage1_history=stage1_history,
        stage2_history=stage2_history,
    )


def run_baselines(data: PreparedFeatures, cfg: BaselineConfig) -> Dict[str, Tuple[LinearModel, RmseMetrics]]:
    """
    Fit OLS and LASSO on the training split of the same scaled features.

    feature_mode 'dc-only' restricts both to the M_v(0) columns.
    """
    names = [data.names[j] for j in baseline_columns(data.names, cfg.feature_mode)]
    subset = data.columns(names)
    logger.info(f"Fitting linear baselines on {len(names)} features ({cfg.feature_mode})")
    models = {
        "ols": fit_linear_regression(subset.x_train, subset.y_train, names),
        "lasso": fit_lasso(
            subset.x_train, subset.y_train, cfg.lasso_lambda, cfg.tol, cfg.max_iter, feature_names=names
        ),
    }
    return {name: (model, subset.rmse(model)) for name, model in models.items()}
