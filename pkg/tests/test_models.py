"""Tests for domain models."""
import numpy as np
import pytest

from src.exceptions import ConfigError, ModelError, SplineGridError
from src.models.features import FeatureSchema, feature_names_for, parse_feature_name
from src.models.kan import ImportanceReport, KanModel, SplineActivation, TrainConfig
from src.models.linear import LinearModel
from src.models.pipeline import ModelBundle, PipelineConfig
from src.models.run import BaselineConfig, ExplainConfig, RunConfig
from src.models.timeseries import ScalerParams


def activation(name="M_a(0)", n_coef=11):
    return SplineActivation(name, np.linspace(-1, 1, 9), 3, np.zeros(n_coef), 0.0)


class TestSplineActivation:
    """Tests for SplineActivation model."""

    def test_creation(self):
        """Test creating a cubic activation on 8 intervals."""
        act = activation()
        assert act.grid_intervals == 8
        assert act.parameter_count == 12

    def test_coefficient_count(self):
        """Test the coefficient count must be intervals + degree."""
        with pytest.raises(ModelError):
            activation(n_coef=10)

    def test_decreasing_grid(self):
        with pytest.raises(SplineGridError):
            SplineActivation("a", np.array([0.0, 0.0, 1.0]), 1, np.zeros(3), 0.0)

    def test_non_finite_weight(self):
        with pytest.raises(ModelError):
            SplineActivation("a", np.linspace(0, 1, 3), 1, np.zeros(3), float("nan"))


class TestKanModel:
    """Tests for KanModel model."""

    def test_duplicate_inputs(self):
        with pytest.raises(ModelError):
            KanModel([activation("x"), activation("x")])

    def test_only_identity_outer(self):
        with pytest.raises(ModelError):
            KanModel([activation()], outer_transform="sigmoid")

    def test_copy_is_deep(self):
        """Test copies do not share coefficient arrays."""
        model = KanModel([activation()], output_bias=0.3)
        clone = model.copy()
        clone.activations[0].coefficients[0] = 5.0
        assert model.activations[0].coefficients[0] == 0.0
        assert clone.output_bias == 0.3


class TestFeatureNames:
    """Tests for the feature-name grammar."""

    def test_order(self):
        assert feature_names_for(["a"], 2) == ("M_a(0)", "M_a(1)", "phi_a(1)", "M_a(2)", "phi_a(2)")

    def test_parse(self):
        parsed = parse_feature_name("phi_video_width(3)")
        assert (parsed.kind, parsed.variable, parsed.frequency) == ("phi", "video_width", 3)
        assert not parsed.is_dc
        assert str(parsed) == "phi_video_width(3)"

    @pytest.mark.parametrize("name", ["phi_a(0)", "M_a", "X_a(1)", "M_a(-1)"])
    def test_invalid(self, name):
        with pytest.raises(ModelError):
            parse_feature_name(name)

    def test_schema_round_trip(self):
        schema = FeatureSchema(F=1, variables=("a", "b"), T=16)
        assert FeatureSchema.from_dict(schema.to_dict()) == schema
        assert len(schema.feature_names) == 6


class TestConfigModels:
    """Tests for configuration dataclasses."""

    def test_train_config_validation(self):
        with pytest.raises(ConfigError):
            TrainConfig(epochs=0)
        with pytest.raises(ConfigError):
            TrainConfig(grid_range_quantiles=(0.9, 0.1))

    def test_pipeline_config_round_trip(self):
        """Test the serialised pipeline config rebuilds the same object."""
        config = PipelineConfig(F=2, k=5, stage2_init="prune", stage1_train=TrainConfig(epochs=7))
        assert PipelineConfig.from_dict(config.to_dict()) == config

    def test_feature_count(self):
        with pytest.raises(ConfigError):
            PipelineConfig(F=1, k=19).check_feature_count(6)

    def test_baseline_and_explain_validation(self):
        with pytest.raises(ConfigError):
            BaselineConfig(lasso_lambda=-1.0)
        with pytest.raises(ConfigError):
            ExplainConfig(range_policy="auto")

    def test_run_config_dict(self):
        payload = RunConfig().to_dict()
        assert payload["pipeline"]["k"] == 10
        assert payload["data"]["label_range"] == [-2.5, 2.5]


class TestOtherModels:
    """Tests for importance, linear and bundle models."""

    def test_importance_records(self):
        records = [{"name": "b", "alpha": 0.4, "rank": 2}, {"name": "a", "alpha": 0.6, "rank": 1}]
        report = ImportanceReport.from_records(records)
        assert report.ranked_names == ["a", "b"]
        assert report.alpha_of("b") == 0.4
        with pytest.raises(ModelError):
            report.alpha_of("c")

    def test_linear_weight_count(self):
        with pytest.raises(ModelError):
            LinearModel(np.zeros(2), 0.0, ("a",))

    def test_bundle_kind(self):
        scaler = ScalerParams(np.zeros(1), np.ones(1), ("M_a(0)",))
        schema = FeatureSchema(F=0, variables=("a",), T=4)
        assert ModelBundle(KanModel([activation()]), scaler, schema).kind == "kan"
        assert ModelBundle(LinearModel(np.zeros(1), 0.0, ("M_a(0)",)), scaler, schema).kind == "linear"
