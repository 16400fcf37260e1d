"""Run configuration loading (JSON canonical, YAML accepted)."""

import json
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from loguru import logger

from ..exceptions import ConfigError, ModelError
from ..models.kan import TrainConfig
from ..models.pipeline import PipelineConfig
from ..models.run import BaselineConfig, DataConfig, ExplainConfig, PlantedEffect, RunConfig, SynthSpec
from ..models.timeseries import SplitSpec
from .settings import DEFAULT_CONFIG_FILE
from .validator import ConfigValidator


def read_config_file(config_file: Path) -> Any:
    """Parse a config file; .yaml/.yml go through yaml.safe_load, everything else is JSON."""
    if not config_file.is_file():
        raise ConfigError(f"Config file not found: {config_file}")
    try:
        with open(config_file, "r", encoding="utf-8") as f:
            if config_file.suffix.lower() in (".yaml", ".yml"):
                return yaml.safe_load(f)
            return json.load(f)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"Cannot parse config {config_file}: {e}")


def _train_config(section: Dict[str, Any], base: Optional[TrainConfig] = None) -> TrainConfig:
    values = dict(section)
    if "grid_range_quantiles" in values:
        values["grid_range_quantiles"] = tuple(values["grid_range_quantiles"])
    return replace(base, **values) if base is not None else TrainConfig(**values)


def _data_config(section: Dict[str, Any], config_file: Optional[Path]) -> DataConfig:
    path = section.get("path")
    if path is not None:
        path = Path(path)
        if not path.is_absolute() and config_file is not None:
            path = config_file.parent / path
    label_range = section.get("label_range", DataConfig.label_range)
    defaults = DataConfig()
    return DataConfig(
        path=path,
        variables=tuple(section.get("variables", defaults.variables)),
        max_length=section.get("max_length", defaults.max_length),
        length_policy=section.get("length_policy", defaults.length_policy),
        label_range=tuple(label_range) if label_range is not None else None,
    )


def _synth_spec(section: Dict[str, Any]) -> SynthSpec:
    values = dict(section)
    if "variables" in values:
        values["variables"] = tuple(values["variables"])
    if "effects" in values:
        values["effects"] = tuple(
            PlantedEffect(e["feature"], e["shape"], float(e["magnitude"])) for e in values["effects"]
        )
    return SynthSpec(**values)


def parse_run_config(raw: Any, config_file: Optional[Path] = None) -> RunConfig:
    """
    Build a RunConfig from a raw mapping.

    Missing sections take their defaults; `stage2_train` starts from `train`.

    Raises:
        ConfigError: Unknown sections or fields, or invalid values
    """
    validator = ConfigValidator()
    raw = validator.validate_top_level(raw, config_file)
    seed = validator.validate_seed(raw, config_file)
    data = validator.validate_data_section(raw, config_file)
    features = validator.validate_section(raw, config_file, "features", ["F"])
    selection = validator.validate_section(raw, config_file, "selection", ["k", "stage2_init"])
    split = validator.validate_section(raw, config_file, "split", ["train", "val", "test"])
    train = validator.validate_train_section(raw, config_file, "train")
    stage2 = validator.validate_train_section(raw, config_file, "stage2_train")
    baselines = validator.validate_section(
        raw, config_file, "baselines", ["enabled", "lasso_lambda", "feature_mode", "tol", "max_iter"]
    )
    explain = validator.validate_section(raw, config_file, "explain", ["n_points", "range_policy"])
    synth = validator.validate_synth_section(raw, config_file)
    validator.validate_number(features, config_file, "F", integer=True, minimum=0)
    validator.validate_number(selection, config_file, "k", integer=True, minimum=1)

    try:
        stage1_train = _train_config(train)
        pipeline = PipelineConfig(
            F=features.get("F", PipelineConfig.F),
            k=selection.get("k", PipelineConfig.k),
            stage2_init=selection.get("stage2_init", PipelineConfig.stage2_init),
            stage1_train=stage1_train,
            stage2_train=_train_config(stage2, base=stage1_train),
            split=SplitSpec(
                train_fraction=split.get("train", SplitSpec.train_fraction),
                val_fraction=split.get("val", SplitSpec.val_fraction),
                test_fraction=split.get("test", SplitSpec.test_fraction),
            ),
        )
        config = RunConfig(
            seed=seed,
            data=_data_config(data, config_file),
            pipeline=pipeline,
            baselines=BaselineConfig(**baselines),
            explain=ExplainConfig(**explain),
            synth=_synth_spec(synth),
            source=config_file,
        )
    except (ConfigError, ModelError) as e:
        raise ConfigError(f"Config {config_file}: {e}")
    except TypeError as e:
        raise ConfigError(f"Config {config_file}: invalid value ({e})")
    return config


def load_run_config(config_file: Optional[Path] = None) -> RunConfig:
    """
    Load the run configuration.

    Without an explicit file the project default is used when present,
    otherwise built-in defaults apply.
    """
    if config_file is None:
        if not DEFAULT_CONFIG_FILE.is_file():
            logger.debug("No config file given; using built-in defaults")
            return RunConfig()
        config_file = DEFAULT_CONFIG_FILE
    config_file = Path(config_file)
    logger.info(f"Loading config from {config_file}")
    return parse_run_config(read_config_file(config_file), config_file)


def apply_seed(config: RunConfig, seed: int) -> RunConfig:
    """Propagate one resolved seed to the split, both training stages and the generator."""
    pipeline = config.pipeline
    return replace(
        config,
        seed=seed,
        pipeline=replace(
            pipeline,
            split=replace(pipeline.split, seed=seed),
            stage1_train=replace(pipeline.stage1_train, seed=seed),
            stage2_train=replace(pipeline.stage2_train, seed=seed),
        ),
        synth=replace(config.synth, seed=seed),
    )
