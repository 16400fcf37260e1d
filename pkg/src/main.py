"""Command-line entry point: tskan synth|train|select|evaluate|explain|predict."""

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger

from .config.constants import (
    CSV_FLOAT_FORMAT,
    EXIT_CONFIG,
    EXIT_DATA,
    EXIT_FAILURE,
    EXIT_INTERRUPTED,
    EXIT_IO,
    EXIT_OK,
    EXIT_TRAINING,
)
from .config.loader import apply_seed, load_run_config
from .config.settings import LOG_DIR, OUTPUT_DIR
from .exceptions import (
    BaselineFitError,
    ConfigError,
    DataValidationError,
    ExportError,
    ModelError,
    TrainingError,
)
from .models.pipeline import ModelBundle, RmseMetrics
from .models.run import RunConfig
from .models.timeseries import Dataset
from .output.curve_exporter import (
    PHASE_SVG,
    export_explanation_report,
    phase_illustration,
    write_importance_csv,
    write_phase_illustration,
)
from .output.json_generator import load_model, load_result, save_model, save_report, write_json
from .output.manifest import build_run_manifest, write_run_manifest
from .output.reporter import print_importance, print_rmse_table
from .processing.dataset_loader import enforce_length, load_dataset
from .processing.importance import select_top_k
from .processing.kan import count_parameters, headline_parameter_count
from .processing.pipeline import prepare_features, run_baselines, run_full_pipeline, run_stage1
from .processing.predict import bundle_features, evaluate_rmse, predict
from .processing.splitting import split_indices
from .processing.synth import generate_synthetic, write_synthetic
from .utils.logging import setup_logging
from .utils.path_validator import ensure_output_dir, validate_input_file
from .utils.progress import TrainingProgress
from .validation.environment import load_environment, resolve_seed

MODEL_FILE = "model.json"
REPORT_FILE = "report.json"
BASELINE_FILES = {"ols": "ols.json", "lasso": "lasso.json"}
PREDICTIONS_FILE = "predictions.csv"
EVALUATION_FILE = "evaluation.json"
EXPLAIN_DIR = "explain"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Run configuration (JSON or YAML)")
    common.add_argument("--seed", type=int, help="Seed for splits, initialisation and generation")
    common.add_argument("--out", type=Path, help=f"Output directory (default {OUTPUT_DIR})")
    common.add_argument("--verbose", "-v", action="store_true", help="Show INFO logs")
    common.add_argument("--debug", action="store_true", help="Show DEBUG logs")
    common.add_argument("--quiet", "-q", action="store_true", help="Hide progress bars and tables")
    common.add_argument("--log-dir", type=Path, default=LOG_DIR, help="Directory for log files")
    common.add_argument("--no-log-file", action="store_true", help="Log to the console only")

    parser = argparse.ArgumentParser(prog="tskan", description="Frequency-domain KAN for QoE prediction")
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", parents=[common], help="Generate a synthetic dataset")
    synth.add_argument("--n", type=int, help="Number of sessions")
    synth.add_argument("--t", type=int, help="Chunks per session")
    synth.add_argument("--noise", type=float, help="Label noise standard deviation")

    for name, text in (("train", "Run the two-stage pipeline"), ("select", "Run stage 1 and rank features")):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument("--data", type=Path, help="Dataset CSV")

    evaluate = commands.add_parser("evaluate", parents=[common], help="RMSE of saved models on a dataset")
    evaluate.add_argument("--data", type=Path, help="Dataset CSV")
    evaluate.add_argument("--model", type=Path, nargs="+", help="Model JSON files (default: models in --out)")

    explain = commands.add_parser("explain", parents=[common], help="Export activation curves")
    explain.add_argument("--report", type=Path, help=f"Report JSON (default: --out/{REPORT_FILE})")
    explain.add_argument("--model", type=Path, help=f"Model JSON (default: --out/{MODEL_FILE})")

    predict_cmd = commands.add_parser("predict", parents=[common], help="Score a dataset with a saved model")
    predict_cmd.add_argument("--model", type=Path, required=True, help="Model JSON")
    predict_cmd.add_argument("--data", type=Path, required=True, help="Dataset CSV")
    return parser


def _load_data(
    path: Optional[Path],
    config: RunConfig,
    variables: Optional[Sequence[str]] = None,
    max_length: Optional[int] = None,
) -> Dataset:
    path = path or config.data.path
    if path is None:
        raise ConfigError("No dataset given: pass --data or set data.path in the config")
    validate_input_file(path, "dataset")
    ds = load_dataset(path, variables or config.data.variables, config.data.label_range)
    return enforce_length(ds, max_length or config.data.max_length, config.data.length_policy)


def _seeds(config: RunConfig) -> Dict[str, int]:
    pipeline = config.pipeline
    return {
        "run": config.seed,
        "split": pipeline.split.seed,
        "stage1": pipeline.stage1_train.seed,
        "stage2": pipeline.stage2_train.seed,
    }


def cmd_synth(args, config: RunConfig, out_dir: Path) -> List[Path]:
    spec = config.synth
    overrides = {k: v for k, v in (("N", args.n), ("T", args.t), ("noise_std", args.noise)) if v is not None}
    if overrides:
        try:
            spec = replace(spec, **overrides)
        except ConfigError as e:
            raise ConfigError(f"Invalid synth option: {e}")
    dataset, truth = generate_synthetic(spec)
    paths = write_synthetic(dataset, truth, out_dir)
    logger.success(f"Wrote {len(dataset)} synthetic sessions to {paths[0]}")
    return paths


def cmd_train(args, config: RunConfig, out_dir: Path) -> List[Path]:
    ds = _load_data(args.data, config)
    data = prepare_features(ds, config.pipeline)
    with TrainingProgress(enabled=not args.quiet) as progress:
        result = run_full_pipeline(ds, config.pipeline, stage_progress=progress.stage, data=data)

    written = [
        save_model(out_dir / MODEL_FILE, ModelBundle(result.final_model, result.scaler, result.schema)),
        write_importance_csv(out_dir / "importance.csv", result.stage1_importance),
    ]
    rows = [("TSKAN", result.metrics, headline_parameter_count(result.final_model))]
    report_extra = {}
    if config.baselines.enabled:
        for name, (model, metrics) in run_baselines(data, config.baselines).items():
            written.append(save_model(out_dir / BASELINE_FILES[name], ModelBundle(model, data.scaler, data.schema)))
            rows.append((name.upper(), metrics, int(np.count_nonzero(model.weights))))
            report_extra[name] = metrics.to_dict()

    written.append(save_report(out_dir / REPORT_FILE, result, _seeds(config), baselines=report_extra))

    if not args.quiet:
        print_rmse_table(rows)
    logger.success(
        f"Selected {len(result.selected_features)} features; test RMSE {result.metrics.test:.4f} "
        f"with {count_parameters(result.final_model)} parameters"
    )
    return written


def cmd_select(args, config: RunConfig, out_dir: Path) -> List[Path]:
    ds = _load_data(args.data, config)
    with TrainingProgress(enabled=not args.quiet) as progress:
        _, report = run_stage1(ds, config.pipeline, stage_progress=progress.stage)
    selected = select_top_k(report, config.pipeline.k)

    importance_csv = write_importance_csv(out_dir / "importance.csv", report)
    importance_json = write_json(
        out_dir / "importance.json",
        {"importance": report.to_records(), "selected_features": selected, "k": config.pipeline.k},
    )
    if not args.quiet:
        print_importance(report, config.pipeline.k)
    logger.success(f"Top-{config.pipeline.k}: {', '.join(selected)}")
    return [importance_csv, importance_json]


def _default_models(out_dir: Path) -> List[Path]:
    candidates = [out_dir / MODEL_FILE] + [out_dir / f for f in BASELINE_FILES.values()]
    return [p for p in candidates if p.is_file()]


def cmd_evaluate(args, config: RunConfig, out_dir: Path) -> List[Path]:
    model_paths = args.model or _default_models(out_dir)
    if not model_paths:
        raise DataValidationError(f"No model files given and none found in {out_dir}")

    rows, records = [], {}
    for path in model_paths:
        validate_input_file(path, "model")
        bundle = load_model(path)
        ds = _load_data(args.data, config, bundle.schema.variables, bundle.schema.T)
        X, y = bundle_features(bundle, ds), ds.labels
        train_idx, val_idx, test_idx = split_indices(len(ds), config.pipeline.split)
        metrics = RmseMetrics(
            train=evaluate_rmse(bundle.model, X[train_idx], y[train_idx]),
            val=evaluate_rmse(bundle.model, X[val_idx], y[val_idx]),
            test=evaluate_rmse(bundle.model, X[test_idx], y[test_idx]),
        )
        params = (
            headline_parameter_count(bundle.model)
            if bundle.kind == "kan"
            else int(np.count_nonzero(bundle.model.weights))
        )
        rows.append((path.stem, metrics, params))
        records[path.name] = {"type": bundle.kind, "parameters": params, **metrics.to_dict()}

    if not args.quiet:
        print_rmse_table(rows)
    return [write_json(out_dir / EVALUATION_FILE, records)]


def cmd_explain(args, config: RunConfig, out_dir: Path) -> List[Path]:
    report_path = args.report or out_dir / REPORT_FILE
    model_path = args.model or out_dir / MODEL_FILE
    validate_input_file(report_path, "report")
    validate_input_file(model_path, "model")
    result = load_result(report_path, model_path)

    explain_dir = ensure_output_dir(out_dir / EXPLAIN_DIR)
    written = export_explanation_report(
        result, explain_dir, config.explain.n_points, config.explain.range_policy
    )
    paths = [explain_dir / name for name in written] + [explain_dir / "manifest.json"]
    T = result.schema.T
    if T >= 4:
        paths.append(write_phase_illustration(explain_dir / PHASE_SVG, phase_illustration(T)))
    logger.success(f"Exported {len(result.selected_features)} activation curves to {explain_dir}")
    return paths


def cmd_predict(args, config: RunConfig, out_dir: Path) -> List[Path]:
    validate_input_file(args.model, "model")
    bundle = load_model(args.model)
    ds = _load_data(args.data, config, bundle.schema.variables, bundle.schema.T)
    predictions = predict(bundle.model, bundle_features(bundle, ds))

    path = out_dir / PREDICTIONS_FILE
    frame = pd.DataFrame({"sample_id": ds.sample_ids, "prediction": predictions})
    try:
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}", path=path)
    logger.success(f"Wrote {len(frame)} predictions to {path}")
    return [path]


COMMANDS = {
    "synth": cmd_synth,
    "train": cmd_train,
    "select": cmd_select,
    "evaluate": cmd_evaluate,
    "explain": cmd_explain,
    "predict": cmd_predict,
}


def run_command(args) -> None:
    """Resolve config and seed, run one command and write its run manifest."""
    started = time.perf_counter()
    load_environment()
    config = load_run_config(args.config)
    seed, source = resolve_seed(args.seed, config.seed)
    logger.info(f"Using seed {seed} (from {source})")
    config = apply_seed(config, seed)
    out_dir = ensure_output_dir(args.out or OUTPUT_DIR)

    outputs = COMMANDS[args.command](args, config, out_dir)
    inputs = [p for p in (getattr(args, "data", None), config.source) if p is not None]
    manifest = build_run_manifest(
        args.command, config.to_dict(), _seeds(config), inputs, outputs, out_dir, time.perf_counter() - started
    )
    write_run_manifest(out_dir, manifest)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(verbose=args.verbose, debug=args.debug, log_dir=None if args.no_log_file else args.log_dir)

    try:
        run_command(args)
        return EXIT_OK

    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        return EXIT_INTERRUPTED
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except (TrainingError, BaselineFitError) as e:
        logger.error(f"Training failed: {e}")
        return EXIT_TRAINING
    except (DataValidationError, ModelError) as e:
        logger.error(f"Data error: {e}")
        return EXIT_DATA
    except ExportError as e:
        logger.error(f"Cannot write output: {e}")
        return EXIT_IO
    except OSError as e:
        logger.error(f"IO error: {e}")
        return EXIT_IO
    except Exception as e:
        logger.error(f"Fatal error: {e}")
        logger.exception("Full traceback:")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
