"""Environment resolution: .env loading and seed precedence."""

import os
from pathlib import Path
from typing import Optional, Tuple

from dotenv import load_dotenv
from loguru import logger

from ..config.settings import ENV_FILE, SEED_ENV_VAR
from ..exceptions import ConfigError


def load_environment(env_file: Path = ENV_FILE) -> None:
    """Load a project .env file if present; existing variables win."""
    if env_file.exists():
        load_dotenv(env_file, override=False)
        logger.debug(f"Loaded environment from {env_file}")


def seed_from_env() -> Optional[int]:
    value = os.getenv(SEED_ENV_VAR)
    if value is None or value.strip() == "":
        return None
    try:
        seed = int(value)
    except ValueError:
        raise ConfigError(f"{SEED_ENV_VAR} must be a non-negative integer, got '{value}'")
    if seed < 0:
        raise ConfigError(f"{SEED_ENV_VAR} must be a non-negative integer, got '{value}'")
    return seed


def resolve_seed(flag_seed: Optional[int], config_seed: Optional[int]) -> Tuple[int, str]:
    """
    Pick the run seed: --seed flag, then config, then TSKAN_SEED, then 0.

    Returns:
        Tuple of (seed, source) where source names where it came from
    """
    if flag_seed is not None:
        if flag_seed < 0:
            raise ConfigError(f"--seed must be non-negative, got {flag_seed}")
        return flag_seed, "flag"
    if config_seed is not None:
        return config_seed, "config"
    env_seed = seed_from_env()
    if env_seed is not None:
        return env_seed, "env"
    return 0, "default"
