"""Time-series dataset models."""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..config.constants import DEFAULT_LABEL_RANGE, DEFAULT_SPLIT, SPLIT_SUM_TOLERANCE
from ..exceptions import ConfigError, ModelError


@dataclass(frozen=True)
class TimeSeriesSample:
    """One streaming session: V x T raw feature matrix plus its MOS label."""

    sample_id: str
    values: np.ndarray  # shape (V, T), one column per chunk
    label: float

    @property
    def length(self) -> int:
        return int(self.values.shape[1])


@dataclass(frozen=True)
class Dataset:
    """Ordered samples sharing one variable schema."""

    samples: Tuple[TimeSeriesSample, ...]
    variable_names: Tuple[str, ...]
    target_length: Optional[int] = None  # None while lengths are ragged
    label_range: Optional[Tuple[float, float]] = DEFAULT_LABEL_RANGE
    dropped_sample_ids: Tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def sample_ids(self) -> List[str]:
        return [s.sample_id for s in self.samples]

    @property
    def labels(self) -> np.ndarray:
        return np.array([s.label for s in self.samples], dtype=float)

    def subset(self, indices) -> "Dataset":
        """Dataset restricted to the given sample positions, in that order."""
        return Dataset(
            samples=tuple(self.samples[i] for i in indices),
            variable_names=self.variable_names,
            target_length=self.target_length,
            label_range=self.label_range,
            dropped_sample_ids=self.dropped_sample_ids,
        )


@dataclass(frozen=True)
class ScalerParams:
    """Per-feature robust scaling: center is the median, scale the IQR."""

    center: np.ndarray
    scale: np.ndarray
    feature_names: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.center.shape != self.scale.shape or self.center.ndim != 1:
            raise ModelError(
                f"Scaler center/scale shapes differ: {self.center.shape} vs {self.scale.shape}"
            )
        if np.any(self.scale <= 0):
            raise ModelError("Scaler scale must be positive for every feature")
        if self.feature_names and len(self.feature_names) != self.center.size:
            raise ModelError(
                f"Scaler has {self.center.size} columns but {len(self.feature_names)} names"
            )

    def index_of(self, feature_name: str) -> int:
        try:
            return self.feature_names.index(feature_name)
        except ValueError:
            raise ModelError(f"Scaler has no feature named '{feature_name}'")

    def subset(self, names) -> "ScalerParams":
        idx = [self.index_of(n) for n in names]
        return ScalerParams(self.center[idx], self.scale[idx], tuple(names))

    def to_dict(self) -> dict:
        return {
            "center": self.center.tolist(),
            "scale": self.scale.tolist(),
            "feature_names": list(self.feature_names),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScalerParams":
        return cls(
            center=np.asarray(data["center"], dtype=float),
            scale=np.asarray(data["scale"], dtype=float),
            feature_names=tuple(data.get("feature_names", ())),
        )


@dataclass(frozen=True)
class SplitSpec:
    """Train/validation/test fractions and shuffle seed."""

    train_fraction: float = DEFAULT_SPLIT[0]
    val_fraction: float = DEFAULT_SPLIT[1]
    test_fraction: float = DEFAULT_SPLIT[2]
    seed: int = 0

    def __post_init__(self) -> None:
        fractions = (self.train_fraction, self.val_fraction, self.test_fraction)
        if any(f <= 0 for f in fractions):
            raise ConfigError(f"Split fractions must be positive, got {fractions}")
        if abs(sum(fractions) - 1.0) > SPLIT_SUM_TOLERANCE:
            raise ConfigError(f"Split fractions must sum to 1, got {sum(fractions)}")
        if self.seed < 0:
            raise ConfigError(f"Split seed must be non-negative, got {self.seed}")
