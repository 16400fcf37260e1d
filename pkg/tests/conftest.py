"""Shared fixtures for TSKAN tests."""

import os

import numpy as np
import pytest

from src.models.kan import TrainConfig
from src.models.pipeline import PipelineConfig
from src.models.run import PlantedEffect, SynthSpec
from src.models.timeseries import Dataset, SplitSpec, TimeSeriesSample
from src.processing.synth import generate_synthetic

SIX_VARIABLES = ("stalling", "bitrate", "chunksize", "qp", "framerate", "videowidth")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: seeded acceptance loops (set TSKAN_RUN_SLOW=1)")


def pytest_collection_modifyitems(config, items):
    if os.getenv("TSKAN_RUN_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="set TSKAN_RUN_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def quick_train():
    """Short training run for pipeline-level tests."""
    return TrainConfig(epochs=150, learning_rate=2e-2, early_stop_patience=150, sparsity_weight=1e-3)


@pytest.fixture
def quick_pipeline(quick_train):
    return PipelineConfig(F=1, k=4, stage1_train=quick_train, stage2_train=quick_train, split=SplitSpec(seed=3))


@pytest.fixture
def small_synthetic():
    """300 six-variable sessions of 8 chunks with four planted effects."""
    spec = SynthSpec(N=300, T=8, noise_std=0.05, seed=11)
    dataset, _ = generate_synthetic(spec)
    return dataset


@pytest.fixture
def single_effect_spec():
    return SynthSpec(
        N=600,
        T=8,
        noise_std=0.05,
        effects=(PlantedEffect("M_stalling(0)", "linear", -1.0),),
        seed=5,
    )


def make_dataset(values_by_id, labels, variables=("a", "b")):
    """Dataset from {sample_id: (V, T) array} and {sample_id: label}."""
    samples = tuple(
        TimeSeriesSample(sample_id=sid, values=np.asarray(v, dtype=float), label=labels[sid])
        for sid, v in values_by_id.items()
    )
    lengths = {s.length for s in samples}
    return Dataset(
        samples=samples,
        variable_names=tuple(variables),
        target_length=lengths.pop() if len(lengths) == 1 else None,
    )
