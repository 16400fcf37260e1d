"""Frequency-domain feature models."""

import re
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..exceptions import ModelError

FEATURE_NAME_PATTERN = re.compile(r"^(M|phi)_([A-Za-z0-9_]+)\((\d+)\)$")


@dataclass(frozen=True)
class Spectrum:
    """Complex DFT coefficients X(f), f = 0..T-1, of one real series."""

    coefficients: np.ndarray

    @property
    def length(self) -> int:
        return int(self.coefficients.size)


@dataclass(frozen=True)
class FrequencyFeatureVector:
    """Flattened [M(0), M(1), phi(1), ..., M(F), phi(F)] per variable."""

    values: np.ndarray
    names: Tuple[str, ...]
    F: int


@dataclass(frozen=True)
class FeatureName:
    """Parsed feature name: kind is 'M' or 'phi'."""

    kind: str
    variable: str
    frequency: int

    @property
    def is_dc(self) -> bool:
        return self.kind == "M" and self.frequency == 0

    def __str__(self) -> str:
        return f"{self.kind}_{self.variable}({self.frequency})"


def magnitude_name(variable: str, frequency: int) -> str:
    return f"M_{variable}({frequency})"


def phase_name(variable: str, frequency: int) -> str:
    return f"phi_{variable}({frequency})"


def parse_feature_name(name: str) -> FeatureName:
    """Parse `M_<var>(<f>)` / `phi_<var>(<f>)`."""
    match = FEATURE_NAME_PATTERN.match(name)
    if not match:
        raise ModelError(f"Invalid feature name '{name}'; expected M_<var>(<f>) or phi_<var>(<f>)")
    kind, variable, frequency = match.groups()
    if kind == "phi" and int(frequency) == 0:
        raise ModelError(f"Invalid feature name '{name}': phase at f=0 is not a feature")
    return FeatureName(kind=kind, variable=variable, frequency=int(frequency))


def feature_names_for(variables, F: int) -> Tuple[str, ...]:
    """Feature names in vector order for the given variables and cutoff."""
    names = []
    for variable in variables:
        names.append(magnitude_name(variable, 0))
        for f in range(1, F + 1):
            names.append(magnitude_name(variable, f))
            names.append(phase_name(variable, f))
    return tuple(names)


@dataclass(frozen=True)
class FeatureSchema:
    """What a trained model expects from raw data."""

    F: int
    variables: Tuple[str, ...]
    T: int

    @property
    def feature_names(self) -> Tuple[str, ...]:
        return feature_names_for(self.variables, self.F)

    def to_dict(self) -> dict:
        return {"F": self.F, "variables": list(self.variables), "T": self.T}

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureSchema":
        return cls(F=int(data["F"]), variables=tuple(data["variables"]), T=int(data["T"]))
