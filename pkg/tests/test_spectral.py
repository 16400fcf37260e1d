"""Tests for DFT feature extraction."""

import numpy as np
import pytest

from src.exceptions import DataValidationError, ModelError
from src.models.features import FeatureSchema, feature_names_for, parse_feature_name
from src.models.timeseries import TimeSeriesSample
from src.processing.spectral import (
    build_feature_matrix,
    build_feature_vector,
    dft,
    extract_components,
    max_frequency,
)

from .conftest import SIX_VARIABLES, make_dataset


def direct_dft(x):
    T = x.size
    t = np.arange(T)
    return np.array([np.sum(x * np.exp(-2j * np.pi * f * t / T)) for f in range(T)])


class TestDft:
    """Tests for dft."""

    def test_matches_direct_summation(self, rng):
        """Test 200 random series against O(T^2) summation."""
        for _ in range(200):
            T = int(rng.integers(4, 65))
            x = rng.normal(size=T) * rng.uniform(0.1, 10.0)
            np.testing.assert_allclose(dft(x).coefficients, direct_dft(x), rtol=0, atol=1e-9)

    def test_parseval(self, rng):
        """Test energy is preserved up to the 1/T factor."""
        for _ in range(50):
            T = int(rng.integers(4, 65))
            x = rng.normal(size=T)
            X = dft(x).coefficients
            assert np.sum(np.abs(X) ** 2) / T == pytest.approx(np.sum(x * x), rel=1e-6)

    def test_dc_is_series_sum(self):
        """Test X(0) equals the plain sum."""
        x = np.array([1.0, 2.0, 3.0, 4.0])
        assert dft(x).coefficients[0].real == pytest.approx(10.0)

    def test_linearity(self, rng):
        """Test dft(a*x + b*y) equals a*dft(x) + b*dft(y)."""
        for _ in range(50):
            T = int(rng.integers(4, 33))
            x, y = rng.normal(size=T), rng.normal(size=T)
            a, b = rng.uniform(-3.0, 3.0, size=2)
            np.testing.assert_allclose(
                dft(a * x + b * y).coefficients,
                a * dft(x).coefficients + b * dft(y).coefficients,
                rtol=0,
                atol=1e-9,
            )

    def test_conjugate_symmetry(self, rng):
        """Test X(T - f) is the complex conjugate of X(f) for real input."""
        for T in (4, 5, 16, 31):
            X = dft(rng.normal(size=T)).coefficients
            for f in range(1, T):
                assert X[T - f] == pytest.approx(np.conj(X[f]), abs=1e-9)

    def test_rejects_nan(self):
        """Test NaN input raises DataValidationError."""
        with pytest.raises(DataValidationError):
            dft(np.array([1.0, np.nan, 2.0]))

    def test_rejects_empty(self):
        """Test empty input raises DataValidationError."""
        with pytest.raises(DataValidationError):
            dft(np.array([]))


class TestExtractComponents:
    """Tests for extract_components."""

    def test_constant_series(self):
        """Test constant series gives DC only with zero magnitude and phase."""
        dc, mags, phases = extract_components(dft(np.full(4, 2.0)), 1)
        assert dc == pytest.approx(8.0)
        assert mags[0] == 0.0
        assert phases[0] == 0.0

    def test_cosine_magnitude_and_phase(self):
        """Test a unit cosine at f=1 has magnitude T/2 and phase 0."""
        T = 16
        x = np.cos(2 * np.pi * np.arange(T) / T)
        dc, mags, phases = extract_components(dft(x), 1)
        assert dc == pytest.approx(0.0, abs=1e-12)
        assert mags[0] == pytest.approx(T / 2)
        assert phases[0] == pytest.approx(0.0, abs=1e-12)

    def test_shifted_cosine_phase(self):
        """Test cos(2 pi t / T + phi) reports phase phi."""
        T = 16
        for phi in (-1.2, 0.4, 2.5):
            x = np.cos(2 * np.pi * np.arange(T) / T + phi)
            _, _, phases = extract_components(dft(x), 1)
            assert phases[0] == pytest.approx(phi, abs=1e-9)

    def test_phases_in_half_open_interval(self, rng):
        """Test phases lie in (-pi, pi]."""
        for _ in range(100):
            x = rng.normal(size=int(rng.integers(4, 33)))
            _, _, phases = extract_components(dft(x), 2)
            assert np.all(phases > -np.pi) and np.all(phases <= np.pi)

    def test_circular_shift_moves_phase_only(self, rng):
        """Test rolling a series by s chunks keeps M(f) and moves phi(1) by -2 pi s / T."""
        for _ in range(50):
            T = int(rng.integers(4, 33))
            x = rng.normal(size=T)
            s = int(rng.integers(1, T))
            dc, mags, phases = extract_components(dft(x), max_frequency(T))
            dc_s, mags_s, phases_s = extract_components(dft(np.roll(x, s)), max_frequency(T))
            assert dc_s == pytest.approx(dc, abs=1e-9)
            np.testing.assert_allclose(mags_s, mags, rtol=0, atol=1e-9)
            if mags[0] > 1e-6:
                wrapped = np.angle(np.exp(1j * (phases_s[0] - phases[0] + 2 * np.pi * s / T)))
                assert wrapped == pytest.approx(0.0, abs=1e-9)

    def test_negated_cosine_phase_is_pi(self):
        """Test a phase on the negative real axis folds to +pi."""
        T = 8
        x = -np.cos(2 * np.pi * np.arange(T) / T)
        _, _, phases = extract_components(dft(x), 1)
        assert phases[0] == pytest.approx(np.pi, abs=1e-9)

    def test_f_above_nyquist_raises(self):
        """Test F > T // 2 raises ModelError."""
        with pytest.raises(ModelError):
            extract_components(dft(np.ones(4)), 3)

    def test_single_chunk_only_allows_dc(self):
        """Test T=1 supports F=0 but not F=1."""
        assert max_frequency(1) == 0
        dc, mags, _ = extract_components(dft(np.array([3.0])), 0)
        assert dc == 3.0 and mags.size == 0
        with pytest.raises(ModelError):
            extract_components(dft(np.array([3.0])), 1)


class TestFeatureVectors:
    """Tests for build_feature_vector and build_feature_matrix."""

    def test_six_variables_f1_has_18_entries(self, rng):
        """Test V=6, F=1 gives 18 named features in per-variable order."""
        sample = TimeSeriesSample("s1", rng.normal(size=(6, 16)), 0.0)
        vector = build_feature_vector(sample, 1, SIX_VARIABLES)
        assert vector.values.shape == (18,)
        assert vector.names[:3] == ("M_stalling(0)", "M_stalling(1)", "phi_stalling(1)")
        assert vector.names[-1] == "phi_videowidth(1)"

    def test_f0_gives_dc_per_variable(self, rng):
        """Test F=0 keeps only M_v(0)."""
        sample = TimeSeriesSample("s1", rng.normal(size=(2, 5)), 0.0)
        vector = build_feature_vector(sample, 0, ("a", "b"))
        assert vector.names == ("M_a(0)", "M_b(0)")
        np.testing.assert_allclose(vector.values, sample.values.sum(axis=1))

    def test_variable_count_mismatch(self, rng):
        """Test a sample with the wrong number of rows raises DataValidationError."""
        sample = TimeSeriesSample("s1", rng.normal(size=(3, 5)), 0.0)
        with pytest.raises(DataValidationError, match="s1"):
            build_feature_vector(sample, 1, ("a", "b"))

    def test_matrix_rows_follow_samples(self, rng):
        """Test the matrix stacks vectors in dataset order."""
        ds = make_dataset(
            {"x1": rng.normal(size=(2, 6)), "x2": rng.normal(size=(2, 6))},
            {"x1": 0.0, "x2": 1.0},
        )
        X, names = build_feature_matrix(ds, 2)
        assert X.shape == (2, 10)
        assert names == feature_names_for(("a", "b"), 2)
        np.testing.assert_allclose(X[1], build_feature_vector(ds.samples[1], 2, ("a", "b")).values)


class TestFeatureNames:
    """Tests for the feature-name grammar."""

    def test_parse_magnitude(self):
        """Test M_<var>(<f>) parses."""
        parsed = parse_feature_name("M_qp(1)")
        assert (parsed.kind, parsed.variable, parsed.frequency) == ("M", "qp", 1)
        assert not parsed.is_dc

    def test_parse_dc(self):
        """Test M_<var>(0) is the DC feature."""
        assert parse_feature_name("M_stalling(0)").is_dc

    def test_phase_at_zero_rejected(self):
        """Test phi_<var>(0) is not a valid feature."""
        with pytest.raises(ModelError):
            parse_feature_name("phi_qp(0)")

    @pytest.mark.parametrize("name", ["M_qp", "X_qp(1)", "M_(1)", "phi_qp(-1)", "M_q p(1)"])
    def test_invalid_names(self, name):
        """Test malformed names raise ModelError."""
        with pytest.raises(ModelError):
            parse_feature_name(name)

    def test_schema_names(self):
        """Test FeatureSchema exposes names in vector order."""
        schema = FeatureSchema(F=1, variables=("a",), T=8)
        assert schema.feature_names == ("M_a(0)", "M_a(1)", "phi_a(1)")
        assert FeatureSchema.from_dict(schema.to_dict()) == schema
