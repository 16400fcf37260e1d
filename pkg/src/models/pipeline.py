"""Selection pipeline configuration and result models."""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, Union

from ..config.constants import DEFAULT_F, DEFAULT_K, DEFAULT_SPLIT, STAGE2_INIT_MODES
from ..exceptions import ConfigError
from .features import FeatureSchema
from .kan import ImportanceReport, KanModel, TrainConfig, TrainHistory
from .linear import LinearModel
from .timeseries import ScalerParams, SplitSpec


@dataclass(frozen=True)
class PipelineConfig:
    """Two-stage run: all F-limited features, then the top-k."""

    F: int = DEFAULT_F
    k: int = DEFAULT_K
    stage1_train: TrainConfig = field(default_factory=TrainConfig)
    stage2_train: TrainConfig = field(default_factory=TrainConfig)
    split: SplitSpec = field(default_factory=SplitSpec)
    stage2_init: str = "fresh"

    def __post_init__(self) -> None:
        if self.F < 0:
            raise ConfigError(f"F must be >= 0, got {self.F}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.stage2_init not in STAGE2_INIT_MODES:
            raise ConfigError(
                f"stage2_init must be one of {', '.join(STAGE2_INIT_MODES)}, got '{self.stage2_init}'"
            )

    def check_feature_count(self, n_variables: int) -> None:
        total = n_variables * (2 * self.F + 1)
        if self.k > total:
            raise ConfigError(f"k={self.k} exceeds the {total} available features (V={n_variables}, F={self.F})")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "F": self.F,
            "k": self.k,
            "stage2_init": self.stage2_init,
            "split": {
                "train": self.split.train_fraction,
                "val": self.split.val_fraction,
                "test": self.split.test_fraction,
                "seed": self.split.seed,
            },
            "stage1_train": self.stage1_train.to_dict(),
            "stage2_train": self.stage2_train.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        split = data.get("split", {})
        return cls(
            F=int(data["F"]),
            k=int(data["k"]),
            stage2_init=data.get("stage2_init", "fresh"),
            split=SplitSpec(
                train_fraction=float(split.get("train", DEFAULT_SPLIT[0])),
                val_fraction=float(split.get("val", DEFAULT_SPLIT[1])),
                test_fraction=float(split.get("test", DEFAULT_SPLIT[2])),
                seed=int(split.get("seed", 0)),
            ),
            stage1_train=TrainConfig.from_dict(data.get("stage1_train", {})),
            stage2_train=TrainConfig.from_dict(data.get("stage2_train", {})),
        )


@dataclass(frozen=True)
class RmseMetrics:
    train: float
    val: float
    test: float

    def to_dict(self) -> Dict[str, float]:
        return {"train": self.train, "val": self.val, "test": self.test}


@dataclass
class PipelineResult:
    """Everything needed to audit or reproduce a selection run."""

    selected_features: Tuple[str, ...]
    stage1_importance: ImportanceReport
    final_model: KanModel
    metrics: RmseMetrics
    scaler: ScalerParams
    schema: FeatureSchema
    config: PipelineConfig
    stage1_metrics: Optional[RmseMetrics] = None
    stage1_history: Optional[TrainHistory] = None
    stage2_history: Optional[TrainHistory] = None


@dataclass
class ModelBundle:
    """A saved model with the scaler and schema needed to score raw data."""

    model: Union[KanModel, LinearModel]
    scaler: ScalerParams
    schema: FeatureSchema

    @property
    def kind(self) -> str:
        return "kan" if isinstance(self.model, KanModel) else "linear"
