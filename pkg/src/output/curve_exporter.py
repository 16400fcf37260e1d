"""Activation curves, importance tables and phase illustrations."""

import json
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger

from ..config.constants import (
    CSV_FLOAT_FORMAT,
    DEFAULT_CURVE_POINTS,
    DEFAULT_PHASES,
    MIN_OPACITY,
    RANGE_POLICIES,
)
from ..exceptions import ConfigError, ExportError, ModelError
from ..models.explain import ActivationCurve, PhaseCurve
from ..models.features import parse_feature_name
from ..models.kan import ImportanceReport, KanModel
from ..models.pipeline import PipelineResult
from ..models.timeseries import ScalerParams
from ..processing.kan import eval_activation
from .svg_writer import Line, line_chart, write_svg

MANIFEST_FILE = "manifest.json"
IMPORTANCE_CSV = "importance.csv"
IMPORTANCE_SVG = "importance_summary.svg"
PHASE_SVG = "phase_illustration.svg"


def display_scale_for(feature: str, T: Optional[int]) -> float:
    """DC features are shown per chunk (divided by T); everything else as is."""
    return float(T) if T and parse_feature_name(feature).is_dc else 1.0


def sample_activation_curve(
    model: KanModel,
    scaler: ScalerParams,
    feature: str,
    n_points: int = DEFAULT_CURVE_POINTS,
    range_policy: str = "data",
    T: Optional[int] = None,
) -> ActivationCurve:
    """
    Sample psi at evenly spaced scaled inputs and map the x-axis to original units.

    With range_policy 'data' the curve covers the training 1st-99th percentile
    range stored on the activation (the grid range when that is missing or
    degenerate); 'grid' covers the whole grid.

    Raises:
        ModelError: Unknown feature or fewer than 2 points
        ConfigError: Unknown range policy
    """
    if range_policy not in RANGE_POLICIES:
        raise ConfigError(f"Range policy must be one of {RANGE_POLICIES}, got '{range_policy}'")
    if n_points < 2:
        raise ModelError(f"A curve needs at least 2 points, got {n_points}")
    activation = model.activation(feature)
    column = scaler.index_of(feature)

    lo, hi = float(activation.grid[0]), float(activation.grid[-1])
    if range_policy == "data" and activation.data_range is not None:
        d_lo, d_hi = activation.data_range
        if d_hi - d_lo > 1e-12:
            lo, hi = float(d_lo), float(d_hi)

    scaled = np.linspace(lo, hi, n_points)
    ys = np.asarray(eval_activation(activation, scaled), dtype=float)
    display_scale = display_scale_for(feature, T)
    xs = (scaled * scaler.scale[column] + scaler.center[column]) / display_scale
    return ActivationCurve(
        feature_name=feature, xs=xs, ys=ys, display_scale=display_scale, scaled_inputs=scaled
    )


def write_curve_csv(path: Path, curve: ActivationCurve) -> Path:
    frame = pd.DataFrame({"x": curve.xs, "y": curve.ys})
    try:
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}", path=Path(path))
    return Path(path)


def _curve_svg(curve: ActivationCurve) -> str:
    unit = f"value / {curve.display_scale:g}" if curve.display_scale != 1.0 else "value"
    return line_chart(
        [Line(curve.xs, curve.ys, 1.0, curve.feature_name)],
        title=curve.feature_name,
        x_label=unit,
        y_label="contribution to MOS",
    )


def write_importance_csv(path: Path, report: ImportanceReport) -> Path:
    frame = pd.DataFrame(report.to_records(), columns=["name", "alpha", "rank"])
    try:
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n", encoding="utf-8")
    except OSError as e:
        raise ExportError(f"Cannot write {path}: {e}", path=Path(path))
    return Path(path)


def opacity_for(alpha: float, max_alpha: float) -> float:
    """Line opacity proportional to importance, floored at MIN_OPACITY."""
    if max_alpha <= 0:
        return MIN_OPACITY
    return max(MIN_OPACITY, alpha / max_alpha)


def _summary_svg(curves: Sequence[ActivationCurve], result: PipelineResult) -> str:
    alphas = {c.feature_name: result.stage1_importance.alpha_of(c.feature_name) for c in curves}
    top = max(alphas.values(), default=0.0)
    lines = []
    for curve in curves:
        span = curve.xs[-1] - curve.xs[0]
        position = (curve.xs - curve.xs[0]) / span if span > 0 else np.linspace(0.0, 1.0, curve.xs.size)
        lines.append(Line(position, curve.ys, opacity_for(alphas[curve.feature_name], top), curve.feature_name))
    return line_chart(
        lines, title="Activation importance", x_label="position in feature range", y_label="contribution to MOS"
    )


def export_explanation_report(
    result: PipelineResult,
    out_dir: Path,
    n_points: int = DEFAULT_CURVE_POINTS,
    range_policy: str = "data",
) -> List[str]:
    """
    Write curve CSV/SVG per selected feature plus importance files and a manifest.

    Returns:
        Relative paths of every written file except the manifest itself, which
        lists them

    Raises:
        ExportError: Output directory or a file cannot be written
    """
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ExportError(f"Cannot create output directory {out_dir}: {e}", path=out_dir)

    written: List[str] = []
    curves = []
    for feature in result.selected_features:
        curve = sample_activation_curve(
            result.final_model, result.scaler, feature, n_points, range_policy, result.schema.T
        )
        curves.append(curve)
        write_curve_csv(out_dir / f"curve_{feature}.csv", curve)
        write_svg(out_dir / f"curve_{feature}.svg", _curve_svg(curve))
        written += [f"curve_{feature}.csv", f"curve_{feature}.svg"]

    write_importance_csv(out_dir / IMPORTANCE_CSV, result.stage1_importance)
    write_svg(out_dir / IMPORTANCE_SVG, _summary_svg(curves, result))
    written += [IMPORTANCE_CSV, IMPORTANCE_SVG]

    manifest = out_dir / MANIFEST_FILE
    try:
        with open(manifest, "w", encoding="utf-8", newline="\n") as f:
            json.dump(written, f, indent=2)
            f.write("\n")
    except OSError as e:
        raise ExportError(f"Cannot write {manifest}: {e}", path=manifest)
    logger.info(f"Exported {len(curves)} activation curves to {out_dir}")
    return written


def phase_illustration(T: int, phases: Sequence[float] = DEFAULT_PHASES) -> List[PhaseCurve]:
    """cos(2 pi t / T + phase) at t = 0..T-1 for each phase."""
    if T < 4:
        raise ConfigError(f"Phase illustration needs T >= 4, got {T}")
    ts = np.arange(T, dtype=float)
    return [PhaseCurve(phase=float(p), ts=ts, values=np.cos(2.0 * np.pi * ts / T + p)) for p in phases]


def write_phase_illustration(path: Path, curves: Sequence[PhaseCurve]) -> Path:
    lines = [Line(c.ts, c.values, 1.0, f"phase {c.phase:.2f}") for c in curves]
    return write_svg(path, line_chart(lines, title="f=1 cosine by phase", x_label="chunk t", y_label="cos"))
