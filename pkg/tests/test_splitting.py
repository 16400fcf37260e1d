"""Tests for train/validation/test splitting."""

import numpy as np
import pytest

from src.config.constants import DEFAULT_SPLIT
from src.exceptions import ConfigError, DataValidationError
from src.models.timeseries import SplitSpec
from src.processing.splitting import split_dataset, split_indices, split_sizes

from .conftest import make_dataset


class TestSplitSizes:
    """Tests for split_sizes."""

    @pytest.mark.parametrize(
        "n,expected",
        [(100, (70, 15, 15)), (3, (1, 1, 1)), (10, (6, 2, 2)), (1000, (700, 150, 150)), (7, (5, 1, 1))],
    )
    def test_sizes(self, n, expected):
        """Test half-up rounding with at least one sample per held-out part."""
        assert split_sizes(n, SplitSpec()) == expected

    def test_custom_fractions(self):
        assert split_sizes(20, SplitSpec(0.5, 0.25, 0.25)) == (10, 5, 5)

    def test_too_few_samples(self):
        """Test fewer than 3 samples cannot be split."""
        with pytest.raises(DataValidationError):
            split_indices(2, SplitSpec())


class TestSplitIndices:
    """Tests for split_indices."""

    def test_partition(self):
        """Test the three parts are disjoint and cover every index."""
        train, val, test = split_indices(57, SplitSpec(seed=4))
        combined = np.concatenate([train, val, test])
        assert sorted(combined.tolist()) == list(range(57))

    def test_deterministic_per_seed(self):
        """Test the same seed reproduces the split and another seed changes it."""
        first = split_indices(40, SplitSpec(seed=1))
        again = split_indices(40, SplitSpec(seed=1))
        other = split_indices(40, SplitSpec(seed=2))
        for a, b in zip(first, again):
            np.testing.assert_array_equal(a, b)
        assert not np.array_equal(first[0], other[0])


class TestSplitDataset:
    """Tests for split_dataset."""

    def test_sample_ids_disjoint(self):
        values = {f"s{i}": np.zeros((2, 4)) for i in range(10)}
        labels = {f"s{i}": float(i) for i in range(10)}
        train, val, test = split_dataset(make_dataset(values, labels), SplitSpec(seed=0))
        ids = [set(part.sample_ids) for part in (train, val, test)]
        assert not ids[0] & ids[1] and not ids[0] & ids[2] and not ids[1] & ids[2]
        assert len(train) + len(val) + len(test) == 10
        assert train.target_length == 4


class TestSplitSpec:
    """Tests for SplitSpec validation."""

    @pytest.mark.parametrize("fractions", [(0.8, 0.15, 0.15), (1.0, 0.0, 0.0), (0.7, -0.15, 0.45)])
    def test_invalid_fractions(self, fractions):
        with pytest.raises(ConfigError):
            SplitSpec(*fractions)

    def test_negative_seed(self):
        with pytest.raises(ConfigError):
            SplitSpec(seed=-1)

    def test_defaults_follow_configured_split(self):
        spec = SplitSpec()
        assert (spec.train_fraction, spec.val_fraction, spec.test_fraction) == DEFAULT_SPLIT
