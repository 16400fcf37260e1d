"""JSON model bundles and pipeline reports."""

import json
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
from loguru import logger

from ..exceptions import DataValidationError, ExportError, ModelError
from ..models.features import FeatureSchema
from ..models.kan import ImportanceReport, KanModel, SplineActivation
from ..models.linear import LinearModel
from ..models.pipeline import ModelBundle, PipelineConfig, PipelineResult, RmseMetrics
from ..models.timeseries import ScalerParams
from ..processing.kan import count_parameters, headline_parameter_count


def write_json(path: Path, payload: Dict[str, Any]) -> Path:
    """Write JSON with a stable layout (2-space indent, LF, trailing newline)."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}", path=path)
    logger.debug(f"Wrote {path}")
    return path


def read_json(path: Path) -> Dict[str, Any]:
    path = Path(path)
    if not path.is_file():
        raise DataValidationError(f"File not found: {path}")
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ModelError(f"{path.name} is not valid JSON: {e}")


def model_payload(bundle: ModelBundle) -> Dict[str, Any]:
    """
    Model envelope shared by KAN and linear models.

    The scaler is restricted to the model inputs, in input order.
    """
    model = bundle.model
    payload: Dict[str, Any] = {"type": bundle.kind}
    if isinstance(model, KanModel):
        payload["inputs"] = [
            {
                "name": a.input_name,
                "grid": a.grid.tolist(),
                "degree": a.degree,
                "coefficients": a.coefficients.tolist(),
                "base_weight": a.base_weight,
                "data_range": list(a.data_range) if a.data_range is not None else None,
            }
            for a in model.activations
        ]
        payload["bias"] = model.output_bias
    else:
        payload["inputs"] = [
            {"name": name, "weight": float(w)} for name, w in zip(model.feature_names, model.weights)
        ]
        payload["intercept"] = model.intercept
        payload["fit_info"] = {k: v for k, v in model.fit_info.items() if k != "objective_history"}
    payload["scaler"] = bundle.scaler.subset(model.input_names).to_dict()
    payload["feature_schema"] = bundle.schema.to_dict()
    return payload


def save_model(path: Path, bundle: ModelBundle) -> Path:
    return write_json(path, model_payload(bundle))


def _kan_from_payload(data: Dict[str, Any]) -> KanModel:
    activations = [
        SplineActivation(
            input_name=entry["name"],
            grid=np.asarray(entry["grid"], dtype=float),
            degree=int(entry["degree"]),
            coefficients=np.asarray(entry["coefficients"], dtype=float),
            base_weight=float(entry["base_weight"]),
            data_range=tuple(entry["data_range"]) if entry.get("data_range") else None,
        )
        for entry in data["inputs"]
    ]
    return KanModel(activations=activations, output_bias=float(data["bias"]))


def _linear_from_payload(data: Dict[str, Any]) -> LinearModel:
    return LinearModel(
        weights=np.array([float(e["weight"]) for e in data["inputs"]]),
        intercept=float(data["intercept"]),
        feature_names=tuple(e["name"] for e in data["inputs"]),
        fit_info=dict(data.get("fit_info", {})),
    )


def load_model(path: Path) -> ModelBundle:
    """
    Read a model JSON written by save_model.

    Raises:
        DataValidationError: File missing
        ModelError: Unknown type or malformed fields
    """
    data = read_json(path)
    kind = data.get("type")
    try:
        if kind == "kan":
            model = _kan_from_payload(data)
        elif kind == "linear":
            model = _linear_from_payload(data)
        else:
            raise ModelError(f"{Path(path).name}: unknown model type '{kind}'")
        scaler = ScalerParams.from_dict(data["scaler"])
        schema = FeatureSchema.from_dict(data["feature_schema"])
    except (KeyError, TypeError, ValueError) as e:
        raise ModelError(f"{Path(path).name}: malformed model file ({e})")
    if scaler.feature_names != model.input_names:
        raise ModelError(f"{Path(path).name}: scaler columns do not match model inputs")
    return ModelBundle(model=model, scaler=scaler, schema=schema)


def report_payload(
    result: PipelineResult,
    seeds: Optional[Dict[str, int]] = None,
    baselines: Optional[Dict[str, Dict[str, float]]] = None,
) -> Dict[str, Any]:
    """Selected features, importance table, metrics, config echo and seeds; baseline RMSEs when given."""
    payload: Dict[str, Any] = {
        "selected_features": list(result.selected_features),
        "importance": result.stage1_importance.to_records(),
        "metrics": result.metrics.to_dict(),
        "stage1_metrics": result.stage1_metrics.to_dict() if result.stage1_metrics else None,
        "parameter_count": count_parameters(result.final_model),
        "headline_parameter_count": headline_parameter_count(result.final_model),
        "feature_schema": result.schema.to_dict(),
        "config": result.config.to_dict(),
        "seeds": dict(seeds or {}),
    }
    for stage, history in (("stage1", result.stage1_history), ("stage2", result.stage2_history)):
        if history is not None:
            payload.setdefault("training", {})[stage] = {
                "epochs_run": len(history.val_rmse),
                "best_epoch": history.best_epoch,
                "stopped_early": history.stopped_early,
                "best_val_rmse": min(history.val_rmse) if history.val_rmse else None,
            }
    if baselines:
        payload["baselines"] = baselines
    return payload


def save_report(
    path: Path,
    result: PipelineResult,
    seeds: Optional[Dict[str, int]] = None,
    baselines: Optional[Dict[str, Dict[str, float]]] = None,
) -> Path:
    return write_json(path, report_payload(result, seeds, baselines))


def load_result(report_path: Path, model_path: Path) -> PipelineResult:
    """Rebuild a PipelineResult from a report and its final-model bundle."""
    report = read_json(report_path)
    bundle = load_model(model_path)
    if not isinstance(bundle.model, KanModel):
        raise ModelError(f"{Path(model_path).name} is not a KAN model")
    try:
        selected = tuple(report["selected_features"])
        metrics = RmseMetrics(**report["metrics"])
        stage1 = RmseMetrics(**report["stage1_metrics"]) if report.get("stage1_metrics") else None
        importance = ImportanceReport.from_records(report["importance"])
        config = PipelineConfig.from_dict(report["config"])
    except (KeyError, TypeError, ValueError) as e:
        raise ModelError(f"{Path(report_path).name}: malformed report ({e})")
    if selected != bundle.model.input_names:
        raise ModelError(
            f"Report selects {list(selected)} but model inputs are {list(bundle.model.input_names)}"
        )
    return PipelineResult(
        selected_features=selected,
        stage1_importance=importance,
        final_model=bundle.model,
        metrics=metrics,
        scaler=bundle.scaler,
        schema=bundle.schema,
        config=config,
        stage1_metrics=stage1,
    )
