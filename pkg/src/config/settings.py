"""TSKAN settings and paths."""

from pathlib import Path

# Base directories
PROJECT_ROOT = Path(__file__).parent.parent.parent
USER_FILES_DIR = PROJECT_ROOT / "USER-FILES"

# Run configuration files
CONFIG_DIR = USER_FILES_DIR / "01.CONFIG"
DEFAULT_CONFIG_FILE = CONFIG_DIR / "tskan.json"

# Output directory
OUTPUT_DIR = USER_FILES_DIR / "05.OUTPUT"

# Log directory (relative to the working directory)
LOG_DIR = Path("logs")

# Environment
ENV_FILE = PROJECT_ROOT / ".env"
SEED_ENV_VAR = "TSKAN_SEED"
