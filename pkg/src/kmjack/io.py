"""Reading censored datasets from CSV.

A dataset file has one observation per line: ``time,status`` or, with
covariates, ``x1,...,xp,time,status``. An optional header line is recognised
by a non-numeric first field. Errors carry the 1-based line number.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from kmjack.errors import DatasetFormatError
from kmjack.km_core import OrderedSample

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LoadedDataset:
    """A dataset file parsed into an ordered sample and aligned covariates."""

    sample: OrderedSample
    covariates: np.ndarray | None
    columns: tuple[str, ...]
    path: Path

    @property
    def p(self) -> int:
        return 0 if self.covariates is None else int(self.covariates.shape[1])


def _is_number(value) -> bool:
    try:
        float(value)
    except (TypeError, ValueError):
        return False
    return True


def _read_frame(path: Path) -> pd.DataFrame:
    try:
        # Row i of the frame is line i + 1 of the file.
        return pd.read_csv(
            path, header=None, dtype=str, skip_blank_lines=False, skipinitialspace=True
        )
    except FileNotFoundError:
        raise DatasetFormatError(f"dataset file not found: {path}")
    except pd.errors.EmptyDataError:
        raise DatasetFormatError(f"dataset file is empty: {path}")
    except pd.errors.ParserError as e:
        raise DatasetFormatError(f"malformed CSV: {e}")


def read_dataset(path: str | Path) -> LoadedDataset:
    """Parse a dataset CSV.

    Args:
        path: File with ``time,status`` or ``x1,...,xp,time,status`` rows.

    Returns:
        The ordered sample with covariate rows permuted to match it.

    Raises:
        DatasetFormatError: On unreadable files, wrong field counts,
            non-numeric values or statuses other than 0/1.
        SampleSizeError: If fewer than two observations are present.
        DomainError: If a time is negative or not finite.
    """
    path = Path(path)
    frame = _read_frame(path)
    if frame.shape[1] < 2:
        raise DatasetFormatError("expected at least two columns (time,status)", line=1)

    columns = tuple(f"x{j + 1}" for j in range(frame.shape[1] - 2)) + ("time", "status")
    first = frame.iloc[0]
    if first.notna().any() and not _is_number(first.iloc[0]):
        columns = tuple(str(c).strip() for c in first)
        frame = frame.iloc[1:]

    frame = frame[frame.notna().any(axis=1)]
    values = frame.apply(pd.to_numeric, errors="coerce")
    bad = values.isna()
    if bad.to_numpy().any():
        row, col = np.argwhere(bad.to_numpy())[0]
        line = int(frame.index[row]) + 1
        raw = frame.iat[row, col]
        if pd.isna(raw):
            raise DatasetFormatError(f"missing value in column '{columns[col]}'", line=line)
        raise DatasetFormatError(f"non-numeric value {raw!r} in column '{columns[col]}'", line=line)

    statuses = values.iloc[:, -1].to_numpy()
    invalid = ~np.isin(statuses, (0, 1))
    if invalid.any():
        row = int(np.argmax(invalid))
        line = int(frame.index[row]) + 1
        raise DatasetFormatError(f"status must be 0 or 1, got {statuses[row]!r}", line=line)

    times = values.iloc[:, -2].to_numpy(dtype=float)
    sample = OrderedSample.from_arrays(times, statuses.astype(np.int8))
    covariates = None
    if values.shape[1] > 2:
        covariates = values.iloc[:, :-2].to_numpy(dtype=float)[sample.order]

    logger.debug("read %d observations (%d covariates) from %s", sample.n, values.shape[1] - 2, path)
    return LoadedDataset(sample=sample, covariates=covariates, columns=columns, path=path)
