"""Run configuration, command records and synthetic data specification."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from ..config.constants import (
    BASELINE_FEATURE_MODES,
    DEFAULT_CURVE_POINTS,
    DEFAULT_LABEL_RANGE,
    DEFAULT_LASSO_LAMBDA,
    DEFAULT_LASSO_MAX_ITER,
    DEFAULT_LASSO_TOL,
    DEFAULT_MAX_LENGTH,
    DEFAULT_VARIABLES,
    RANGE_POLICIES,
)
from ..exceptions import ConfigError
from .features import parse_feature_name
from .pipeline import PipelineConfig

PLANTED_SHAPES = ("linear", "quadratic", "sine", "threshold")


@dataclass(frozen=True)
class PlantedEffect:
    """Additive contribution shape(z) * magnitude on one frequency feature."""

    feature: str
    shape: str
    magnitude: float

    def __post_init__(self) -> None:
        parse_feature_name(self.feature)
        if self.shape not in PLANTED_SHAPES:
            raise ConfigError(
                f"Planted effect shape must be one of {', '.join(PLANTED_SHAPES)}, got '{self.shape}'"
            )


# Four informative features: level and phase of stalling, level of bitrate, f=1 magnitude of qp
DEFAULT_PLANTED_EFFECTS = (
    PlantedEffect("M_stalling(0)", "linear", -0.6),
    PlantedEffect("M_bitrate(0)", "sine", 0.5),
    PlantedEffect("M_qp(1)", "quadratic", -0.5),
    PlantedEffect("phi_stalling(1)", "linear", -0.3),
)


@dataclass(frozen=True)
class SynthSpec:
    """Seeded synthetic session generator settings."""

    N: int = 2000
    T: int = 16
    variables: Tuple[str, ...] = DEFAULT_VARIABLES
    noise_std: float = 0.1
    effects: Tuple[PlantedEffect, ...] = DEFAULT_PLANTED_EFFECTS
    texture_std: float = 0.0
    seed: int = 0

    @property
    def V(self) -> int:
        return len(self.variables)

    def __post_init__(self) -> None:
        if self.N < 3:
            raise ConfigError(f"Synthetic N must be >= 3, got {self.N}")
        if self.T < 3:
            raise ConfigError(f"Synthetic T must be >= 3 so f=1 is not the Nyquist bin, got {self.T}")
        if self.noise_std < 0 or self.texture_std < 0:
            raise ConfigError("noise_std and texture_std must be >= 0")
        if len(set(self.variables)) != len(self.variables):
            raise ConfigError("Synthetic variable names must be unique")
        for effect in self.effects:
            parsed = parse_feature_name(effect.feature)
            if parsed.variable not in self.variables:
                raise ConfigError(f"Planted feature '{effect.feature}' names unknown variable '{parsed.variable}'")
            if parsed.frequency > 1:
                raise ConfigError(f"Planted feature '{effect.feature}' must use f <= 1")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.N,
            "T": self.T,
            "variables": list(self.variables),
            "noise_std": self.noise_std,
            "texture_std": self.texture_std,
            "seed": self.seed,
            "effects": [
                {"feature": e.feature, "shape": e.shape, "magnitude": e.magnitude} for e in self.effects
            ],
        }


@dataclass
class RunManifest:
    """One CLI invocation: what ran, with which inputs, producing which files."""

    command: str
    config: Dict[str, Any]
    seeds: Dict[str, int]
    inputs: List[str] = field(default_factory=list)
    outputs: Dict[str, str] = field(default_factory=dict)  # relative path -> sha256
    duration_seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "config": self.config,
            "seeds": self.seeds,
            "inputs": list(self.inputs),
            "artifacts": dict(self.outputs),
            "duration_seconds": self.duration_seconds,
        }


@dataclass(frozen=True)
class DataConfig:
    """Where the dataset lives and how its sessions are shaped."""

    path: Optional[Path] = None
    variables: Tuple[str, ...] = DEFAULT_VARIABLES
    max_length: int = DEFAULT_MAX_LENGTH
    length_policy: str = "drop"
    label_range: Optional[Tuple[float, float]] = DEFAULT_LABEL_RANGE


@dataclass(frozen=True)
class BaselineConfig:
    enabled: bool = True
    lasso_lambda: float = DEFAULT_LASSO_LAMBDA
    feature_mode: str = "frequency"
    tol: float = DEFAULT_LASSO_TOL
    max_iter: int = DEFAULT_LASSO_MAX_ITER

    def __post_init__(self) -> None:
        if self.lasso_lambda < 0:
            raise ConfigError(f"lasso_lambda must be >= 0, got {self.lasso_lambda}")
        if self.feature_mode not in BASELINE_FEATURE_MODES:
            raise ConfigError(
                f"feature_mode must be one of {', '.join(BASELINE_FEATURE_MODES)}, got '{self.feature_mode}'"
            )
        if self.tol <= 0 or self.max_iter < 1:
            raise ConfigError("LASSO tol must be > 0 and max_iter >= 1")


@dataclass(frozen=True)
class ExplainConfig:
    n_points: int = DEFAULT_CURVE_POINTS
    range_policy: str = "data"

    def __post_init__(self) -> None:
        if self.n_points < 2:
            raise ConfigError(f"explain.n_points must be >= 2, got {self.n_points}")
        if self.range_policy not in RANGE_POLICIES:
            raise ConfigError(
                f"explain.range_policy must be one of {', '.join(RANGE_POLICIES)}, got '{self.range_policy}'"
            )


@dataclass(frozen=True)
class RunConfig:
    """Parsed run configuration shared by every command."""

    seed: Optional[int] = None
    data: DataConfig = field(default_factory=DataConfig)
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    baselines: BaselineConfig = field(default_factory=BaselineConfig)
    explain: ExplainConfig = field(default_factory=ExplainConfig)
    synth: SynthSpec = field(default_factory=SynthSpec)
    source: Optional[Path] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "data": {
                "path": str(self.data.path) if self.data.path else None,
                "variables": list(self.data.variables),
                "max_length": self.data.max_length,
                "length_policy": self.data.length_policy,
                "label_range": list(self.data.label_range) if self.data.label_range else None,
            },
            "pipeline": self.pipeline.to_dict(),
            "baselines": {
                "enabled": self.baselines.enabled,
                "lasso_lambda": self.baselines.lasso_lambda,
                "feature_mode": self.baselines.feature_mode,
                "tol": self.baselines.tol,
                "max_iter": self.baselines.max_iter,
            },
            "explain": {"n_points": self.explain.n_points, "range_policy": self.explain.range_policy},
            "synth": self.synth.to_dict(),
        }
