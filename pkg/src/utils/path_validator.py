"""Path validation for command inputs and output directories."""

from pathlib import Path

from loguru import logger

from ..exceptions import DataValidationError, ExportError


def validate_input_file(path: Path, path_type: str) -> Path:
    """
    Validate that an input file exists.

    Args:
        path: File to check
        path_type: Description for error messages ('dataset', 'model', ...)

    Raises:
        DataValidationError: Missing path or not a file
    """
    path = Path(path)
    if not path.exists():
        raise DataValidationError(f"{path_type.capitalize()} file does not exist: {path}")
    if not path.is_file():
        raise DataValidationError(f"{path_type.capitalize()} path is not a file: {path}")
    return path


def ensure_output_dir(path: Path) -> Path:
    """
    Create an output directory if needed and confirm it is a directory.

    Raises:
        ExportError: Path exists as a file or cannot be created
    """
    path = Path(path)
    if path.exists() and not path.is_dir():
        raise ExportError(f"Output path is not a directory: {path}", path=path)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise ExportError(f"Cannot create output directory {path}: {e}", path=path)
    logger.debug(f"Output directory ready: {path}")
    return path
