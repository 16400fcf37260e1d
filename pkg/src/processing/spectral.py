"""Per-variable DFT and frequency-domain feature vectors."""

from typing import Sequence, Tuple

import numpy as np

from ..config.constants import DC_IMAG_TOL, ZERO_MAGNITUDE_TOL
from ..exceptions import DataValidationError, ModelError
from ..models.features import FrequencyFeatureVector, Spectrum, feature_names_for
from ..models.timeseries import Dataset, TimeSeriesSample


def dft(series: np.ndarray) -> Spectrum:
    """
    Unnormalised DFT: X(f) = sum_t x(t) exp(-j 2 pi f t / T), f = 0..T-1.

    X(0) is therefore the plain sum of the series.
    """
    series = np.asarray(series, dtype=float)
    if series.ndim != 1 or series.size == 0:
        raise DataValidationError(f"DFT needs a non-empty 1-D series, got shape {series.shape}")
    if not np.all(np.isfinite(series)):
        raise DataValidationError("DFT input contains NaN or Inf")
    return Spectrum(coefficients=np.fft.fft(series))


def max_frequency(T: int) -> int:
    return T // 2


def extract_components(spec: Spectrum, F: int) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    DC value plus magnitudes and phases for f = 1..F.

    Phases lie in (-pi, pi]. Coefficients whose modulus is negligible relative
    to the largest coefficient report magnitude 0 and phase 0.

    Returns:
        (dc, mags, phases) with mags/phases of length F
    """
    T = spec.length
    if not 0 <= F <= max_frequency(T):
        raise ModelError(f"F={F} out of range for T={T}; must be 0..{max_frequency(T)}")

    coefficients = spec.coefficients
    largest = float(np.max(np.abs(coefficients))) if T else 0.0
    threshold = ZERO_MAGNITUDE_TOL * max(1.0, largest)

    dc_coef = coefficients[0]
    if abs(dc_coef.imag) >= DC_IMAG_TOL * max(1.0, abs(dc_coef.real)):
        raise ModelError(f"DC coefficient has imaginary part {dc_coef.imag}; input was not real")
    dc = float(dc_coef.real) if abs(dc_coef) >= threshold else 0.0

    selected = coefficients[1:F + 1]
    mags = np.abs(selected)
    # imaginary round-off below the threshold counts as zero
    imag = np.where(np.abs(selected.imag) < threshold, 0.0, selected.imag)
    phases = np.arctan2(imag, selected.real)
    # arctan2 yields -pi for (-0.0, negative); fold onto +pi
    phases = np.where(phases <= -np.pi, np.pi, phases)
    negligible = mags < threshold
    mags = np.where(negligible, 0.0, mags)
    phases = np.where(negligible, 0.0, phases)
    return dc, mags, phases


def build_feature_vector(
    sample: TimeSeriesSample, F: int, variable_names: Sequence[str]
) -> FrequencyFeatureVector:
    """
    Concatenate [M(0), M(1), phi(1), ..., M(F), phi(F)] per variable.

    M(0) is the DC value itself (the series sum). With V=6 and F=1 the vector
    has 18 entries.
    """
    if sample.values.shape[0] != len(variable_names):
        raise DataValidationError(
            f"Sample '{sample.sample_id}' has {sample.values.shape[0]} variables, "
            f"schema has {len(variable_names)}"
        )
    values = []
    for row in sample.values:
        dc, mags, phases = extract_components(dft(row), F)
        values.append(dc)
        for mag, phase in zip(mags, phases):
            values.extend((mag, phase))
    return FrequencyFeatureVector(
        values=np.asarray(values, dtype=float),
        names=feature_names_for(variable_names, F),
        F=F,
    )


def build_feature_matrix(ds: Dataset, F: int) -> Tuple[np.ndarray, Tuple[str, ...]]:
    """Stack feature vectors of every sample: (N, V * (2F + 1)) plus names."""
    names = feature_names_for(ds.variable_names, F)
    if not ds.samples:
        return np.empty((0, len(names))), names
    rows = [build_feature_vector(s, F, ds.variable_names).values for s in ds.samples]
    return np.vstack(rows), names
