"""Deterministic train/validation/test splitting."""

import math
from typing import Tuple

import numpy as np
from loguru import logger

from ..exceptions import DataValidationError
from ..models.timeseries import Dataset, SplitSpec


def split_sizes(n: int, spec: SplitSpec) -> Tuple[int, int, int]:
    """
    Partition sizes for n samples.

    Validation and test get max(1, round-half-up(n * f)); train takes the
    remainder. n=100 at (0.7, 0.15, 0.15) gives (70, 15, 15); n=3 gives (1, 1, 1).
    """
    n_val = max(1, math.floor(n * spec.val_fraction + 0.5))
    n_test = max(1, math.floor(n * spec.test_fraction + 0.5))
    n_train = n - n_val - n_test
    if n_train < 1:
        raise DataValidationError(
            f"Cannot split {n} samples into non-empty parts "
            f"(train={n_train}, val={n_val}, test={n_test})"
        )
    return n_train, n_val, n_test


def split_indices(n: int, spec: SplitSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Shuffled index partitions under spec.seed."""
    if n < 3:
        raise DataValidationError(f"Need at least 3 samples to split, got {n}")
    n_train, n_val, _ = split_sizes(n, spec)
    order = np.random.default_rng(spec.seed).permutation(n)
    return order[:n_train], order[n_train:n_train + n_val], order[n_train + n_val:]


def split_dataset(ds: Dataset, spec: SplitSpec) -> Tuple[Dataset, Dataset, Dataset]:
    """Split a dataset into disjoint train/val/test datasets."""
    train_idx, val_idx, test_idx = split_indices(len(ds), spec)
    logger.info(
        f"Split {len(ds)} samples into train={train_idx.size}, "
        f"val={val_idx.size}, test={test_idx.size} (seed={spec.seed})"
    )
    return ds.subset(train_idx), ds.subset(val_idx), ds.subset(test_idx)
