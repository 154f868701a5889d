"""CSV output of study results and the readers used to check it."""

import logging
import math
from dataclasses import asdict
from pathlib import Path

import numpy as np
import pandas as pd

from kmjack.errors import DatasetFormatError

from .config import dump_config
from .runner import ESTIMATORS, Estimator, RunSummary, StudyResult

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["p_percent", "n", "estimator", "value", "replications", "valid_count"]
CURVE_COLUMNS = [
    "distribution",
    "estimator",
    "n",
    "p_percent",
    "mean_bias",
    "variance",
    "mc_se",
    "valid_count",
    "mean_jackknife_bias",
    "mean_modified_bias",
]
_CELL_SERIES = ["mean_jackknife_bias", "mean_modified_bias"]

_ESTIMATOR_RANK = {e.value: i for i, e in enumerate(ESTIMATORS)}


def summaries_frame(result: StudyResult) -> pd.DataFrame:
    """One row per summary, sorted by (p_percent, n, estimator)."""
    frame = pd.DataFrame(
        [
            {
                "p_percent": s.p_percent,
                "n": s.n,
                "estimator": s.estimator.value,
                "mean_bias": s.mean_bias,
                "variance": s.variance,
                "mc_se": s.mc_se,
                "replications": s.replications,
                "valid_count": s.valid_count,
            }
            for s in result.summaries
        ]
    )
    frame["_rank"] = frame["estimator"].map(_ESTIMATOR_RANK)
    frame = frame.sort_values(["p_percent", "n", "_rank"], kind="stable")
    return frame.drop(columns="_rank").reset_index(drop=True)


def _write(frame: pd.DataFrame, path: Path) -> Path:
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def _with_cell_series(curves: pd.DataFrame, result: StudyResult) -> pd.DataFrame:
    if not result.cells:
        return curves.assign(**{name: math.nan for name in _CELL_SERIES})
    cells = pd.DataFrame([asdict(c) for c in result.cells])[["n", "p_percent", *_CELL_SERIES]]
    return curves.merge(cells, on=["n", "p_percent"], how="left", validate="many_to_one")


def emit_tables(result: StudyResult, directory: str | Path) -> list[Path]:
    """Write the result files of one study into ``directory``.

    Files:
        ``bias.csv`` and ``variance.csv``: columns
        ``p_percent,n,estimator,value,replications,valid_count``, sorted by
        (p, n, estimator); ``curves.csv``: bias against p per estimator and n,
        with the cell means of the jackknife bias estimates alongside;
        ``cells.csv``: per-cell data diagnostics; ``config.used.json``.

    Returns:
        The paths written.

    Raises:
        OSError: If the directory cannot be created or written.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    frame = summaries_frame(result)

    written = []
    for name, column in (("bias.csv", "mean_bias"), ("variance.csv", "variance")):
        table = frame.rename(columns={column: "value"})[TABLE_COLUMNS]
        written.append(_write(table, directory / name))

    curves = _with_cell_series(frame.assign(distribution=result.distribution), result)
    curves["_rank"] = curves["estimator"].map(_ESTIMATOR_RANK)
    curves = curves.sort_values(["_rank", "n", "p_percent"], kind="stable")[CURVE_COLUMNS]
    written.append(_write(curves, directory / "curves.csv"))

    if result.cells:
        cells = pd.DataFrame([asdict(c) for c in result.cells])
        cells = cells.sort_values(["p_percent", "n"], kind="stable")
        written.append(_write(cells, directory / "cells.csv"))

    written.append(dump_config(result.config, directory))
    logger.info("wrote %d result files to %s", len(written), directory)
    return written


def _read_table(path: Path) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path)
    except FileNotFoundError:
        raise DatasetFormatError(f"result table not found: {path}")
    if list(frame.columns) != TABLE_COLUMNS:
        raise DatasetFormatError(f"{path.name}: unexpected header {list(frame.columns)}", line=1)
    return frame


def read_summaries(directory: str | Path) -> list[RunSummary]:
    """Rebuild the summaries from ``bias.csv`` and ``variance.csv``.

    The Monte-Carlo standard error is recomputed from the variance and the
    valid count.
    """
    directory = Path(directory)
    bias = _read_table(directory / "bias.csv")
    variance = _read_table(directory / "variance.csv")
    keys = ["p_percent", "n", "estimator", "replications", "valid_count"]
    merged = bias.merge(variance, on=keys, suffixes=("_bias", "_variance"), validate="one_to_one")
    if len(merged) != len(bias):
        raise DatasetFormatError("bias.csv and variance.csv do not describe the same grid")

    summaries = []
    for row in merged.itertuples(index=False):
        count = int(row.valid_count)
        var = float(row.value_variance)
        summaries.append(
            RunSummary(
                estimator=Estimator.from_name(row.estimator),
                n=int(row.n),
                p_percent=int(row.p_percent),
                mean_bias=float(row.value_bias),
                variance=var,
                replications=int(row.replications),
                valid_count=count,
                mc_se=math.sqrt(var / count) if count else math.nan,
            )
        )
    return summaries


def peak_censoring(
    curves: pd.DataFrame | str | Path,
    estimator: Estimator | str,
    n: int,
    column: str = "mean_bias",
) -> int:
    """Censoring percentage at which ``|column|`` of ``estimator`` peaks for sample size ``n``.

    Args:
        curves: A ``curves.csv`` frame or its path.
        estimator: Estimator or its name.
        n: Sample size.
        column: The series to scan, ``mean_bias`` or one of the jackknife
            bias estimate means.

    Raises:
        KeyError: If the curve has no finite points.
    """
    if not isinstance(curves, pd.DataFrame):
        curves = pd.read_csv(curves)
    name = estimator.value if isinstance(estimator, Estimator) else estimator
    curve = curves[(curves["estimator"] == name) & (curves["n"] == n)]
    magnitude = curve[column].abs().to_numpy()
    if curve.empty or not np.isfinite(magnitude).any():
        raise KeyError((name, n))
    return int(curve["p_percent"].to_numpy()[np.nanargmax(magnitude)])
