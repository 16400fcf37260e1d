"""Interpretability artifact models."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ActivationCurve:
    """psi sampled over a feature's range, x-axis in original units / display_scale."""

    feature_name: str
    xs: np.ndarray
    ys: np.ndarray
    display_scale: float
    scaled_inputs: np.ndarray


@dataclass(frozen=True)
class PhaseCurve:
    """cos(2 pi t / T + phase) sampled at t = 0..T-1."""

    phase: float
    ts: np.ndarray
    values: np.ndarray
