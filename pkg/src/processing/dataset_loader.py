"""Dataset loading and length enforcement for long-format session CSVs."""

import re
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from natsort import natsorted

from ..config.constants import DEFAULT_LABEL_RANGE
from ..exceptions import DataValidationError
from ..models.timeseries import Dataset, TimeSeriesSample

ID_COLUMN = "sample_id"
CHUNK_COLUMN = "chunk_index"
LABEL_COLUMN = "mos"
LENGTH_POLICIES = ("drop", "error")
VARIABLE_NAME_PATTERN = re.compile(r"^[A-Za-z0-9_]+$")


def validate_variable_names(variables: Sequence[str]) -> Tuple[str, ...]:
    """Variable names must be unique ASCII identifiers usable in feature names."""
    if not variables:
        raise DataValidationError("Dataset schema needs at least one variable")
    for name in variables:
        if not VARIABLE_NAME_PATTERN.match(name):
            raise DataValidationError(
                f"Variable name '{name}' must match [A-Za-z0-9_]+ to form feature names"
            )
        if name in (ID_COLUMN, CHUNK_COLUMN, LABEL_COLUMN):
            raise DataValidationError(f"Variable name '{name}' clashes with a reserved column")
    if len(set(variables)) != len(variables):
        raise DataValidationError(f"Duplicate variable names in schema: {list(variables)}")
    return tuple(variables)


def _read_frame(path: Path) -> pd.DataFrame:
    if not path.exists():
        raise DataValidationError(f"Dataset file not found: {path}")
    if not path.is_file():
        raise DataValidationError(f"Dataset path is not a file: {path}")
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataValidationError(f"Cannot parse dataset {path}: {e}")


def _to_numeric(frame: pd.DataFrame, columns: Sequence[str], path: Path) -> pd.DataFrame:
    """Convert columns to float, naming the first offending row and column."""
    numeric = frame[list(columns)].apply(pd.to_numeric, errors="coerce")
    bad = numeric.isna() | ~np.isfinite(numeric.to_numpy(dtype=float))
    if bad.to_numpy().any():
        row_pos, col_pos = np.argwhere(bad.to_numpy())[0]
        column = columns[col_pos]
        value = frame.iloc[row_pos][column]
        # +2: header line plus 1-based numbering
        raise DataValidationError(
            f"{path.name}: non-numeric value '{value}' at row {row_pos + 2}, column '{column}'"
        )
    # astype(float) round-trips %.17g text exactly
    return frame[list(columns)].astype(float)


def load_dataset(
    path: Path,
    schema: Sequence[str],
    label_range: Optional[Tuple[float, float]] = DEFAULT_LABEL_RANGE,
) -> Dataset:
    """
    Load a long-format dataset CSV into samples.

    Expected header: `sample_id,chunk_index,<var1>,...,<varV>,mos`, one row per
    chunk. Samples are ordered by natural sort of sample_id; rows inside a
    sample follow chunk_index, so row order in the file does not matter.

    Args:
        path: CSV file path
        schema: Expected variable names, in model order
        label_range: Inclusive (low, high) MOS bounds, or None to skip the check

    Returns:
        Dataset with ragged lengths allowed (target_length None unless uniform)

    Raises:
        DataValidationError: Missing columns, non-numeric cells, duplicate or
            non-contiguous chunk indices, inconsistent labels, out-of-range labels
    """
    path = Path(path)
    variables = validate_variable_names(schema)
    frame = _read_frame(path)

    required = [ID_COLUMN, CHUNK_COLUMN, *variables, LABEL_COLUMN]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise DataValidationError(
            f"{path.name}: missing column(s) {missing}; found {list(frame.columns)}"
        )
    if frame.empty:
        raise DataValidationError(f"{path.name}: dataset has no rows")

    numeric = _to_numeric(frame, [CHUNK_COLUMN, *variables, LABEL_COLUMN], path)
    chunk = numeric[CHUNK_COLUMN].to_numpy()
    if np.any(chunk != np.floor(chunk)) or np.any(chunk < 0):
        raise DataValidationError(f"{path.name}: chunk_index must be a non-negative integer")
    numeric[CHUNK_COLUMN] = chunk.astype(int)
    numeric[ID_COLUMN] = frame[ID_COLUMN].str.strip()

    duplicated = numeric.duplicated(subset=[ID_COLUMN, CHUNK_COLUMN], keep=False)
    if duplicated.any():
        first = numeric[duplicated].iloc[0]
        raise DataValidationError(
            f"{path.name}: duplicate (sample_id, chunk_index) = "
            f"('{first[ID_COLUMN]}', {first[CHUNK_COLUMN]})"
        )

    samples = []
    for sample_id in natsorted(numeric[ID_COLUMN].unique()):
        rows = numeric[numeric[ID_COLUMN] == sample_id].sort_values(CHUNK_COLUMN)
        indices = rows[CHUNK_COLUMN].to_numpy()
        if not np.array_equal(indices, np.arange(indices.size)):
            raise DataValidationError(
                f"{path.name}: sample '{sample_id}' chunk_index must run 0..{indices.size - 1}, "
                f"got {indices.tolist()}"
            )
        labels = rows[LABEL_COLUMN].to_numpy()
        if np.any(labels != labels[0]):
            raise DataValidationError(f"{path.name}: sample '{sample_id}' has differing mos values")
        label = float(labels[0])
        if label_range is not None and not label_range[0] <= label <= label_range[1]:
            raise DataValidationError(
                f"{path.name}: sample '{sample_id}' mos {label} outside {list(label_range)}"
            )
        values = rows[list(variables)].to_numpy(dtype=float).T.copy()
        samples.append(TimeSeriesSample(sample_id=sample_id, values=values, label=label))

    lengths = {s.length for s in samples}
    target_length = lengths.pop() if len(lengths) == 1 else None
    logger.info(
        f"Loaded {len(samples)} samples x {len(variables)} variables from {path.name} "
        f"(lengths: {'uniform ' + str(target_length) if target_length else 'ragged'})"
    )
    return Dataset(
        samples=tuple(samples),
        variable_names=variables,
        target_length=target_length,
        label_range=label_range,
    )


def enforce_length(ds: Dataset, max_T: int, policy: str = "drop") -> Dataset:
    """
    Fix every sample to exactly max_T chunks.

    Longer samples are dropped (policy 'drop') or rejected (policy 'error');
    shorter samples are always rejected. Dropped ids accumulate on the
    returned dataset.

    Raises:
        DataValidationError: Sample shorter than max_T, or longer with policy 'error'
    """
    if max_T < 1:
        raise DataValidationError(f"max_T must be >= 1, got {max_T}")
    if policy not in LENGTH_POLICIES:
        raise DataValidationError(f"Length policy must be one of {LENGTH_POLICIES}, got '{policy}'")

    kept, dropped = [], []
    for sample in ds.samples:
        if sample.length < max_T:
            raise DataValidationError(
                f"Sample '{sample.sample_id}' has {sample.length} chunks, fewer than {max_T}"
            )
        if sample.length > max_T:
            if policy == "error":
                raise DataValidationError(
                    f"Sample '{sample.sample_id}' has {sample.length} chunks, more than {max_T}"
                )
            dropped.append(sample.sample_id)
            continue
        kept.append(sample)

    if dropped:
        logger.info(f"Dropped {len(dropped)} samples longer than {max_T} chunks")
    if not kept:
        raise DataValidationError(f"No samples left after enforcing length {max_T}")

    return Dataset(
        samples=tuple(kept),
        variable_names=ds.variable_names,
        target_length=max_T,
        label_range=ds.label_range,
        dropped_sample_ids=ds.dropped_sample_ids + tuple(dropped),
    )


def write_dataset(ds: Dataset, path: Path) -> None:
    """Write a dataset back to the long CSV format."""
    records = []
    for sample in ds.samples:
        for t in range(sample.length):
            row = {ID_COLUMN: sample.sample_id, CHUNK_COLUMN: t}
            row.update({v: sample.values[i, t] for i, v in enumerate(ds.variable_names)})
            row[LABEL_COLUMN] = sample.label
            records.append(row)
    frame = pd.DataFrame.from_records(
        records, columns=[ID_COLUMN, CHUNK_COLUMN, *ds.variable_names, LABEL_COLUMN]
    )
    frame.to_csv(path, index=False, float_format="%.17g", lineterminator="\n", encoding="utf-8")
