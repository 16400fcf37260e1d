"""One-layer Kolmogorov-Arnold network models."""

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from ..config.constants import (
    DEFAULT_DEGREE,
    DEFAULT_EPOCHS,
    DEFAULT_GRID_QUANTILES,
    DEFAULT_GRID_SIZE,
    DEFAULT_LEARNING_RATE,
    DEFAULT_PATIENCE,
    DEFAULT_SMOOTHNESS,
    DEFAULT_SPARSITY,
    GRID_MARGIN,
)
from ..exceptions import ConfigError, ModelError, SplineGridError


@dataclass
class SplineActivation:
    """
    Learned univariate function psi(x) = sum_i c_i B_i(x) + w_b * silu(x).

    `grid` holds the grid_intervals + 1 boundary points of the spline domain;
    the basis extends `degree` knots beyond each end. `data_range` is the
    scaled training range the activation was fitted on.
    """

    input_name: str
    grid: np.ndarray
    degree: int
    coefficients: np.ndarray
    base_weight: float
    data_range: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        self.grid = np.asarray(self.grid, dtype=float)
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        validate_grid(self.grid)
        if self.degree < 1:
            raise ModelError(f"Activation '{self.input_name}' degree must be >= 1, got {self.degree}")
        expected = self.grid_intervals + self.degree
        if self.coefficients.shape != (expected,):
            raise ModelError(
                f"Activation '{self.input_name}' needs {expected} coefficients, "
                f"got {self.coefficients.size}"
            )
        if not np.all(np.isfinite(self.coefficients)) or not np.isfinite(self.base_weight):
            raise ModelError(f"Activation '{self.input_name}' has non-finite parameters")

    @property
    def grid_intervals(self) -> int:
        return int(self.grid.size - 1)

    @property
    def parameter_count(self) -> int:
        return int(self.coefficients.size + 1)


def validate_grid(grid: np.ndarray) -> None:
    """Grid must be finite, 1-D, strictly increasing with >= 2 points."""
    if grid.ndim != 1 or grid.size < 2:
        raise SplineGridError(f"Grid needs at least 2 boundary points, got shape {grid.shape}")
    if not np.all(np.isfinite(grid)):
        raise SplineGridError("Grid contains non-finite knots")
    if not np.all(np.diff(grid) > 0):
        raise SplineGridError("Grid knots must be strictly increasing")


@dataclass
class KanModel:
    """Sum of activations plus bias; the outer function is fixed to identity."""

    activations: List[SplineActivation]
    output_bias: float = 0.0
    outer_transform: str = "identity"

    def __post_init__(self) -> None:
        if self.outer_transform != "identity":
            raise ModelError(f"Only the identity outer transform is supported, got '{self.outer_transform}'")
        names = self.input_names
        if len(set(names)) != len(names):
            raise ModelError("Activation input names must be unique")

    @property
    def input_names(self) -> Tuple[str, ...]:
        return tuple(a.input_name for a in self.activations)

    def activation(self, name: str) -> SplineActivation:
        for act in self.activations:
            if act.input_name == name:
                return act
        raise ModelError(f"Model has no activation for feature '{name}'")

    def copy(self) -> "KanModel":
        return KanModel(
            activations=[
                replace(a, grid=a.grid.copy(), coefficients=a.coefficients.copy())
                for a in self.activations
            ],
            output_bias=float(self.output_bias),
        )


@dataclass(frozen=True)
class TrainConfig:
    """Optimiser and regularisation settings for one training run."""

    epochs: int = DEFAULT_EPOCHS
    learning_rate: float = DEFAULT_LEARNING_RATE
    smoothness_weight: float = DEFAULT_SMOOTHNESS
    sparsity_weight: float = DEFAULT_SPARSITY
    seed: int = 0
    early_stop_patience: int = DEFAULT_PATIENCE
    grid_size: int = DEFAULT_GRID_SIZE
    degree: int = DEFAULT_DEGREE
    grid_range_quantiles: Tuple[float, float] = DEFAULT_GRID_QUANTILES
    grid_margin: float = GRID_MARGIN

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if self.learning_rate < 0:
            raise ConfigError(f"learning_rate must be >= 0, got {self.learning_rate}")
        if self.smoothness_weight < 0 or self.sparsity_weight < 0:
            raise ConfigError("Regularisation weights must be >= 0")
        if self.early_stop_patience < 1:
            raise ConfigError(f"early_stop_patience must be >= 1, got {self.early_stop_patience}")
        if self.grid_size < 1 or self.degree < 1:
            raise ConfigError("grid_size and degree must be >= 1")
        lo, hi = self.grid_range_quantiles
        if not 0.0 <= lo < hi <= 1.0:
            raise ConfigError(f"grid_range_quantiles must satisfy 0 <= lo < hi <= 1, got {self.grid_range_quantiles}")
        if self.grid_margin < 0:
            raise ConfigError(f"grid_margin must be >= 0, got {self.grid_margin}")

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "smoothness_weight": self.smoothness_weight,
            "sparsity_weight": self.sparsity_weight,
            "seed": self.seed,
            "early_stop_patience": self.early_stop_patience,
            "grid_size": self.grid_size,
            "degree": self.degree,
            "grid_range_quantiles": list(self.grid_range_quantiles),
            "grid_margin": self.grid_margin,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        values = dict(data)
        if "grid_range_quantiles" in values:
            values["grid_range_quantiles"] = tuple(values["grid_range_quantiles"])
        return cls(**values)


@dataclass
class TrainHistory:
    """Per-epoch training loss and validation RMSE."""

    train_loss: List[float] = field(default_factory=list)
    val_rmse: List[float] = field(default_factory=list)
    best_epoch: int = 0
    stopped_early: bool = False

    def to_dict(self) -> dict:
        return {
            "train_loss": list(self.train_loss),
            "val_rmse": list(self.val_rmse),
            "best_epoch": self.best_epoch,
            "stopped_early": self.stopped_early,
        }


@dataclass(frozen=True)
class ImportanceEntry:
    name: str
    alpha: float
    rank: int  # 1-based


@dataclass(frozen=True)
class ImportanceReport:
    """Importance scores ordered by rank."""

    entries: Tuple[ImportanceEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def ranked_names(self) -> List[str]:
        return [e.name for e in self.entries]

    def alpha_of(self, name: str) -> float:
        for entry in self.entries:
            if entry.name == name:
                return entry.alpha
        raise ModelError(f"Importance report has no feature '{name}'")

    def to_records(self) -> List[dict]:
        return [{"name": e.name, "alpha": e.alpha, "rank": e.rank} for e in self.entries]

    @classmethod
    def from_records(cls, records) -> "ImportanceReport":
        entries = [ImportanceEntry(r["name"], float(r["alpha"]), int(r["rank"])) for r in records]
        return cls(tuple(sorted(entries, key=lambda e: e.rank)))
