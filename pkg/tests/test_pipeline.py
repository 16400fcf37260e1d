"""Tests for the two-stage selection pipeline and baselines wiring."""

from dataclasses import replace

import numpy as np
import pytest

from src.exceptions import ConfigError, DataValidationError
from src.models.kan import TrainConfig
from src.models.pipeline import PipelineConfig
from src.models.run import BaselineConfig, PlantedEffect, SynthSpec
from src.models.timeseries import SplitSpec
from src.output.json_generator import report_payload
from src.processing.kan import forward_batch, headline_parameter_count
from src.processing.pipeline import (
    _pruned_model,
    prepare_features,
    run_baselines,
    run_full_pipeline,
    run_stage1,
)
from src.processing.synth import generate_synthetic

from .conftest import make_dataset


class TestPrepareFeatures:
    """Tests for prepare_features."""

    def test_shapes_and_split(self, small_synthetic, quick_pipeline):
        """Test 18 F=1 features and a 210/45/45 split."""
        data = prepare_features(small_synthetic, quick_pipeline)
        assert len(data.names) == 18
        assert data.x_train.shape == (210, 18)
        assert data.x_val.shape == (45, 18)
        assert data.x_test.shape == (45, 18)
        assert data.schema.T == 8

    def test_scaler_fitted_on_train(self, small_synthetic, quick_pipeline):
        """Test training columns are centred on their median."""
        data = prepare_features(small_synthetic, quick_pipeline)
        np.testing.assert_allclose(np.median(data.x_train, axis=0), 0.0, atol=1e-9)

    def test_targets_unscaled(self, small_synthetic, quick_pipeline):
        data = prepare_features(small_synthetic, quick_pipeline)
        all_targets = np.concatenate([data.y_train, data.y_val, data.y_test])
        np.testing.assert_allclose(np.sort(all_targets), np.sort(small_synthetic.labels))

    def test_ragged_rejected(self, quick_pipeline):
        values = {"s1": np.zeros((2, 4)), "s2": np.zeros((2, 5)), "s3": np.zeros((2, 4))}
        ds = make_dataset(values, {"s1": 0.0, "s2": 0.0, "s3": 0.0})
        with pytest.raises(DataValidationError, match="lengths"):
            prepare_features(ds, quick_pipeline)

    def test_k_above_feature_count(self, small_synthetic, quick_pipeline):
        with pytest.raises(ConfigError, match="exceeds"):
            prepare_features(small_synthetic, replace(quick_pipeline, k=19))

    def test_columns_subset(self, small_synthetic, quick_pipeline):
        data = prepare_features(small_synthetic, quick_pipeline)
        sub = data.columns(["M_qp(1)", "M_stalling(0)"])
        np.testing.assert_array_equal(sub.x_train[:, 1], data.x_train[:, data.names.index("M_stalling(0)")])
        assert sub.scaler.feature_names == ("M_qp(1)", "M_stalling(0)")


class TestRunStage1:
    """Tests for run_stage1."""

    def test_ranks_every_feature(self, small_synthetic, quick_pipeline):
        model, report = run_stage1(small_synthetic, quick_pipeline)
        assert len(model.activations) == 18
        assert len(report) == 18
        assert sum(e.alpha for e in report.entries) == pytest.approx(1.0)

    def test_stage_progress_hook(self, small_synthetic, quick_pipeline):
        """Test the stage hook is asked for a callback with the epoch budget."""
        calls = []

        def hook(label, total):
            calls.append((label, total))
            return lambda epoch, loss, rmse: None

        run_stage1(small_synthetic, quick_pipeline, stage_progress=hook)
        assert calls == [("Stage 1", 150)]


class TestRunFullPipeline:
    """Tests for run_full_pipeline."""

    def test_selection_contract(self, small_synthetic, quick_pipeline):
        """Test stage 2 keeps exactly the top-k stage-1 features."""
        result = run_full_pipeline(small_synthetic, quick_pipeline)
        assert len(result.selected_features) == 4
        assert list(result.selected_features) == result.stage1_importance.ranked_names[:4]
        assert result.final_model.input_names == result.selected_features
        assert set(result.selected_features) <= set(result.stage1_importance.ranked_names)
        assert all(np.isfinite([result.metrics.train, result.metrics.val, result.metrics.test]))
        assert result.stage1_history is not None and result.stage2_history is not None
        assert result.scaler.feature_names == result.schema.feature_names

    def test_deterministic(self, small_synthetic, quick_pipeline):
        """Test two runs give identical serialised results."""
        first = report_payload(run_full_pipeline(small_synthetic, quick_pipeline))
        second = report_payload(run_full_pipeline(small_synthetic, quick_pipeline))
        assert first == second

    def test_top_k_prefix(self, small_synthetic, quick_pipeline):
        """Test the k-set is a prefix of the (k+1)-set for the same seed."""
        _, report = run_stage1(small_synthetic, quick_pipeline)
        small = run_full_pipeline(small_synthetic, replace(quick_pipeline, k=3)).selected_features
        large = run_full_pipeline(small_synthetic, quick_pipeline).selected_features
        assert large[:3] == small
        assert list(large) == report.ranked_names[:4]

    def test_recovers_single_informative_feature(self, single_effect_spec):
        """Test k=1 on a one-effect target selects the planted feature."""
        ds, _ = generate_synthetic(single_effect_spec)
        train_cfg = TrainConfig(epochs=300, learning_rate=2e-2, early_stop_patience=300, sparsity_weight=1e-2)
        cfg = PipelineConfig(F=1, k=1, stage1_train=train_cfg, stage2_train=train_cfg, split=SplitSpec(seed=0))
        result = run_full_pipeline(ds, cfg)
        assert result.selected_features == ("M_stalling(0)",)
        assert result.metrics.test < 0.2

    def test_six_variable_f1_k10_parameter_count(self, small_synthetic, quick_train):
        """Test F=1, k=10 gives 10 activations worth 120 parameters."""
        short = replace(quick_train, epochs=5)
        cfg = PipelineConfig(F=1, k=10, stage1_train=short, stage2_train=short)
        result = run_full_pipeline(small_synthetic, cfg)
        assert len(result.final_model.activations) == 10
        assert headline_parameter_count(result.final_model) == 120

    def test_prune_start(self, small_synthetic, quick_pipeline):
        """Test prune mode still trains on the selected features."""
        result = run_full_pipeline(small_synthetic, replace(quick_pipeline, stage2_init="prune"))
        assert result.final_model.input_names == result.selected_features
        assert result.config.stage2_init == "prune"

    def test_stage2_not_materially_worse(self, single_effect_spec):
        """Test retraining on the informative feature keeps test RMSE within 0.02 of stage 1."""
        ds, _ = generate_synthetic(single_effect_spec)
        train_cfg = TrainConfig(epochs=300, learning_rate=2e-2, early_stop_patience=300, sparsity_weight=1e-2)
        cfg = PipelineConfig(F=1, k=1, stage1_train=train_cfg, stage2_train=train_cfg, split=SplitSpec(seed=0))
        result = run_full_pipeline(ds, cfg)
        assert result.selected_features == ("M_stalling(0)",)
        assert result.metrics.test <= result.stage1_metrics.test + 0.02

    def test_reuses_prepared_features(self, small_synthetic, quick_pipeline, monkeypatch):
        """Test passing prepared features skips rebuilding them and changes nothing."""
        data = prepare_features(small_synthetic, quick_pipeline)
        expected = report_payload(run_full_pipeline(small_synthetic, quick_pipeline))

        def rebuilt(*_args, **_kwargs):
            raise AssertionError("features were rebuilt")

        monkeypatch.setattr("src.processing.pipeline.prepare_features", rebuilt)
        assert report_payload(run_full_pipeline(small_synthetic, quick_pipeline, data=data)) == expected


class TestPrunedModel:
    """Tests for the stage-2 prune start."""

    def test_bias_absorbs_dropped_activations(self, small_synthetic, quick_pipeline):
        """Test the pruned model keeps the stage-1 mean training prediction."""
        data = prepare_features(small_synthetic, quick_pipeline)
        model, report = run_stage1(small_synthetic, quick_pipeline)
        selected = report.ranked_names[:4]
        pruned = _pruned_model(model, selected, data.x_train)
        reduced = data.columns(selected)
        assert forward_batch(pruned, reduced.x_train).mean() == pytest.approx(
            forward_batch(model, data.x_train).mean(), abs=1e-9
        )
        np.testing.assert_array_equal(
            pruned.activation(selected[0]).coefficients, model.activation(selected[0]).coefficients
        )


class TestRunBaselines:
    """Tests for run_baselines."""

    def test_frequency_mode(self, small_synthetic, quick_pipeline):
        data = prepare_features(small_synthetic, quick_pipeline)
        fitted = run_baselines(data, BaselineConfig(lasso_lambda=0.5))
        assert set(fitted) == {"ols", "lasso"}
        ols, metrics = fitted["ols"]
        assert ols.feature_names == data.names
        assert metrics.test > 0

    def test_dc_only_mode(self, small_synthetic, quick_pipeline):
        """Test dc-only baselines see one column per variable."""
        data = prepare_features(small_synthetic, quick_pipeline)
        fitted = run_baselines(data, BaselineConfig(feature_mode="dc-only"))
        assert fitted["lasso"][0].feature_names == tuple(f"M_{v}(0)" for v in small_synthetic.variable_names)


@pytest.mark.slow
class TestSyntheticAcceptance:
    """Seeded end-to-end runs on the default six-variable generator."""

    def test_planted_features_recovered(self):
        """Test top-6 covers the four planted features in at least 19 of 20 runs."""
        hits = 0
        for seed in range(20):
            ds, truth = generate_synthetic(SynthSpec(N=2000, T=16, noise_std=0.1, seed=seed))
            train_cfg = TrainConfig(seed=seed)
            cfg = PipelineConfig(F=1, k=6, stage1_train=train_cfg, stage2_train=train_cfg, split=SplitSpec(seed=seed))
            result = run_full_pipeline(ds, cfg)
            hits += set(truth["informative_features"]) <= set(result.selected_features)
            assert result.metrics.test <= 1.5 * 0.1
        assert hits >= 19

    def test_noiseless_target_fitted(self):
        """Test a noise-free dataset with the default planted effects reaches test RMSE 0.05."""
        ds, _ = generate_synthetic(SynthSpec(N=2000, T=16, noise_std=0.0, seed=0))
        train_cfg = TrainConfig(seed=0)
        cfg = PipelineConfig(F=1, k=6, stage1_train=train_cfg, stage2_train=train_cfg, split=SplitSpec(seed=0))
        assert run_full_pipeline(ds, cfg).metrics.test <= 0.05

    def test_beats_linear_on_nonlinear_effect(self):
        """Test median TSKAN RMSE is at least 20% below OLS with a quadratic effect."""
        ratios = []
        for seed in range(10):
            spec = SynthSpec(
                N=2000, T=16, noise_std=0.1, seed=seed,
                effects=(PlantedEffect("M_qp(1)", "quadratic", -1.0), PlantedEffect("M_stalling(0)", "linear", -0.6)),
            )
            ds, _ = generate_synthetic(spec)
            train_cfg = TrainConfig(seed=seed)
            cfg = PipelineConfig(F=1, k=6, stage1_train=train_cfg, stage2_train=train_cfg, split=SplitSpec(seed=seed))
            result = run_full_pipeline(ds, cfg)
            ols = run_baselines(prepare_features(ds, cfg), BaselineConfig())["ols"][1]
            ratios.append(result.metrics.test / ols.test)
        assert np.median(ratios) <= 0.8
