"""Run configuration validation."""

from pathlib import Path
from typing import Any, Dict, Iterable, Optional

from ..exceptions import ConfigError

SECTIONS = (
    "seed",
    "data",
    "features",
    "selection",
    "split",
    "train",
    "stage2_train",
    "baselines",
    "explain",
    "synth",
)
TRAIN_FIELDS = (
    "epochs",
    "learning_rate",
    "smoothness_weight",
    "sparsity_weight",
    "seed",
    "early_stop_patience",
    "grid_size",
    "degree",
    "grid_range_quantiles",
    "grid_margin",
)


class ConfigValidator:
    """Section-by-section checks on a raw configuration mapping."""

    @staticmethod
    def validate_top_level(raw: Any, config_file: Optional[Path]) -> Dict[str, Any]:
        if raw is None:
            return {}
        if not isinstance(raw, dict):
            raise ConfigError(f"Config {config_file} must be a mapping of sections")
        unknown = sorted(set(raw) - set(SECTIONS))
        if unknown:
            raise ConfigError(
                f"Config {config_file} has unknown section(s) {unknown}. "
                f"Known sections: {', '.join(SECTIONS)}"
            )
        return raw

    @staticmethod
    def validate_section(
        raw: Dict[str, Any], config_file: Optional[Path], section_name: str, allowed_fields: Iterable[str]
    ) -> Dict[str, Any]:
        """
        Return a section as a dict (empty when absent), rejecting unknown fields.

        Raises:
            ConfigError: Section is not a mapping or has unknown fields
        """
        section = raw.get(section_name)
        if section is None:
            return {}
        if not isinstance(section, dict):
            raise ConfigError(f"Config {config_file}: '{section_name}' must be a mapping")
        allowed = set(allowed_fields)
        for field in section:
            if field not in allowed:
                raise ConfigError(
                    f"Config {config_file} has unknown field '{section_name}.{field}'. "
                    f"Allowed: {', '.join(sorted(allowed))}"
                )
        return section

    @staticmethod
    def validate_number(
        section: Dict[str, Any],
        config_file: Optional[Path],
        name: str,
        integer: bool = False,
        minimum: Optional[float] = None,
    ):
        """Numeric field check; returns None when the field is absent."""
        if name not in section:
            return None
        value = section[name]
        kind = int if integer else (int, float)
        if isinstance(value, bool) or not isinstance(value, kind):
            expected = "an integer" if integer else "a number"
            raise ConfigError(f"Config {config_file}: '{name}' must be {expected}, got {value!r}")
        if minimum is not None and value < minimum:
            raise ConfigError(f"Config {config_file}: '{name}' must be >= {minimum}, got {value}")
        return value

    @staticmethod
    def validate_seed(raw: Dict[str, Any], config_file: Optional[Path]) -> Optional[int]:
        return ConfigValidator.validate_number(raw, config_file, "seed", integer=True, minimum=0)

    @staticmethod
    def validate_data_section(raw: Dict[str, Any], config_file: Optional[Path]) -> Dict[str, Any]:
        section = ConfigValidator.validate_section(
            raw, config_file, "data", ["path", "variables", "max_length", "length_policy", "label_range"]
        )
        variables = section.get("variables")
        if variables is not None and (
            not isinstance(variables, list) or not variables or not all(isinstance(v, str) for v in variables)
        ):
            raise ConfigError(f"Config {config_file}: 'data.variables' must be a non-empty list of names")
        ConfigValidator.validate_number(section, config_file, "max_length", integer=True, minimum=1)
        if section.get("length_policy", "drop") not in ("drop", "error"):
            raise ConfigError(f"Config {config_file}: 'data.length_policy' must be 'drop' or 'error'")
        label_range = section.get("label_range")
        if label_range is not None and (
            not isinstance(label_range, list) or len(label_range) != 2 or label_range[0] > label_range[1]
        ):
            raise ConfigError(f"Config {config_file}: 'data.label_range' must be [low, high] or null")
        return section

    @staticmethod
    def validate_train_section(raw: Dict[str, Any], config_file: Optional[Path], name: str) -> Dict[str, Any]:
        section = ConfigValidator.validate_section(raw, config_file, name, TRAIN_FIELDS)
        for field in ("epochs", "early_stop_patience", "grid_size", "degree", "seed"):
            ConfigValidator.validate_number(section, config_file, field, integer=True)
        for field in ("learning_rate", "smoothness_weight", "sparsity_weight", "grid_margin"):
            ConfigValidator.validate_number(section, config_file, field)
        return section

    @staticmethod
    def validate_synth_section(raw: Dict[str, Any], config_file: Optional[Path]) -> Dict[str, Any]:
        section = ConfigValidator.validate_section(
            raw, config_file, "synth", ["N", "T", "variables", "noise_std", "effects", "texture_std", "seed"]
        )
        for effect in section.get("effects", []) or []:
            if not isinstance(effect, dict) or not {"feature", "shape", "magnitude"} <= set(effect):
                raise ConfigError(
                    f"Config {config_file}: each 'synth.effects' entry needs feature, shape and magnitude"
                )
        return section
