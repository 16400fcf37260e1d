"""
Seeded synthetic session generator.

Series are built backwards from their DC and f=1 components, so every planted
effect is an exact function of one frequency feature of the model schema.
"""

import json
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
from loguru import logger

from ..config.constants import DEFAULT_LABEL_RANGE
from ..exceptions import ExportError
from ..models.features import parse_feature_name
from ..models.run import PlantedEffect, SynthSpec
from ..models.timeseries import Dataset, TimeSeriesSample
from .dataset_loader import write_dataset

# variable -> (level low, level high, f=1 swing amplitude), per-chunk units
VARIABLE_RANGES: Dict[str, Tuple[float, float, float]] = {
    "stalling": (0.0, 2.0, 0.5),
    "bitrate": (300.0, 6000.0, 1500.0),
    "chunksize": (100.0, 3000.0, 800.0),
    "qp": (20.0, 45.0, 6.0),
    "framerate": (24.0, 60.0, 6.0),
    "videowidth": (320.0, 1920.0, 480.0),
}
UNIT_RANGE = (0.0, 1.0, 0.5)

DATASET_FILE = "synthetic.csv"
GROUND_TRUTH_FILE = "ground_truth.json"


def variable_range(name: str) -> Tuple[float, float, float]:
    return VARIABLE_RANGES.get(name, UNIT_RANGE)


def apply_shape(shape: str, z: np.ndarray, magnitude: float) -> np.ndarray:
    """Planted response on a normalised input z in [-1, 1]."""
    if shape == "linear":
        return magnitude * z
    if shape == "quadratic":
        return magnitude * z * z
    if shape == "sine":
        return magnitude * np.sin(np.pi * z)
    return magnitude * (z > 0).astype(float)


def _normalised_input(effect: PlantedEffect, levels, mags, phases, variables, T: int) -> np.ndarray:
    parsed = parse_feature_name(effect.feature)
    v = variables.index(parsed.variable)
    lo, hi, swing = variable_range(parsed.variable)
    if parsed.is_dc:
        return 2.0 * (levels[:, v] - lo) / (hi - lo) - 1.0
    if parsed.kind == "M":
        return 2.0 * mags[:, v] / (swing * T / 2.0) - 1.0
    return phases[:, v] / np.pi


def generate_synthetic(spec: SynthSpec) -> Tuple[Dataset, dict]:
    """
    Draw N sessions and their labels.

    Per variable a level m and an f=1 magnitude/phase are drawn; the series is
    m + (2 M1 / T) cos(2 pi t / T + phi), so its DFT has DC T*m and f=1
    coefficient M1 exp(j phi). Optional texture adds harmonics at
    2 <= f < T/2, leaving the F<=1 features unchanged. Labels are the sum of
    planted effects plus Gaussian noise.

    Returns:
        Tuple of (dataset, ground-truth record)
    """
    rng = np.random.default_rng(spec.seed)
    N, T, V = spec.N, spec.T, spec.V
    ranges = np.array([variable_range(v) for v in spec.variables])
    lo, hi, swing = ranges[:, 0], ranges[:, 1], ranges[:, 2]

    levels = rng.uniform(lo, hi, size=(N, V))
    mags = rng.uniform(0.0, swing * T / 2.0, size=(N, V))
    phases = rng.uniform(-np.pi, np.pi, size=(N, V))

    t = np.arange(T)
    angle = 2.0 * np.pi * t / T
    series = levels[:, :, None] + (2.0 * mags / T)[:, :, None] * np.cos(angle[None, None, :] + phases[:, :, None])
    harmonics = list(range(2, (T + 1) // 2))
    if spec.texture_std > 0 and harmonics:
        for f in harmonics:
            amp = rng.normal(0.0, spec.texture_std, size=(N, V)) * swing
            shift = rng.uniform(-np.pi, np.pi, size=(N, V))
            series += amp[:, :, None] * np.cos(f * angle[None, None, :] + shift[:, :, None])

    labels = np.zeros(N)
    for effect in spec.effects:
        z = _normalised_input(effect, levels, mags, phases, spec.variables, T)
        labels += apply_shape(effect.shape, z, effect.magnitude)
    if spec.noise_std > 0:
        labels += rng.normal(0.0, spec.noise_std, size=N)

    low, high = DEFAULT_LABEL_RANGE
    outside = int(np.sum((labels < low) | (labels > high)))
    if outside:
        logger.warning(f"{outside} synthetic labels fall outside [{low}, {high}]; load with a wider label_range")

    width = len(str(N - 1))
    samples = tuple(
        TimeSeriesSample(sample_id=f"s{i:0{width}d}", values=series[i], label=float(labels[i]))
        for i in range(N)
    )
    dataset = Dataset(samples=samples, variable_names=tuple(spec.variables), target_length=T, label_range=None)
    truth = {
        "spec": spec.to_dict(),
        "informative_features": sorted({e.feature for e in spec.effects}),
        "variable_ranges": {
            v: {"low": float(r[0]), "high": float(r[1]), "swing": float(r[2])}
            for v, r in zip(spec.variables, ranges)
        },
    }
    logger.info(f"Generated {N} synthetic sessions (V={V}, T={T}, {len(spec.effects)} planted effects)")
    return dataset, truth


def write_synthetic(dataset: Dataset, truth: dict, out_dir: Path) -> List[Path]:
    """Write the dataset CSV and ground-truth JSON; returns both paths."""
    out_dir = Path(out_dir)
    data_path = out_dir / DATASET_FILE
    truth_path = out_dir / GROUND_TRUTH_FILE
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_dataset(dataset, data_path)
        with open(truth_path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(truth, f, indent=2, sort_keys=True)
            f.write("\n")
    except OSError as e:
        raise ExportError(f"Cannot write synthetic data to {out_dir}: {e}", path=out_dir)
    return [data_path, truth_path]
