"""Linear baseline model."""

from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from ..exceptions import ModelError


@dataclass
class LinearModel:
    """y = X w + b; `fit_info` records the fitting method and convergence."""

    weights: np.ndarray
    intercept: float
    feature_names: Tuple[str, ...]
    fit_info: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (len(self.feature_names),):
            raise ModelError(
                f"Linear model has {self.weights.size} weights for {len(self.feature_names)} features"
            )
        if not np.all(np.isfinite(self.weights)) or not np.isfinite(self.intercept):
            raise ModelError("Linear model parameters must be finite")

    @property
    def input_names(self) -> Tuple[str, ...]:
        return self.feature_names
