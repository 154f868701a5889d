"""Simulation studies: configuration, the Monte-Carlo runner and result tables."""

from .config import (
    CONFIG_ECHO,
    StudyConfig,
    StudyKind,
    config_from_dict,
    dump_config,
    load_config,
)
from .runner import (
    ESTIMATORS,
    CellDiagnostics,
    Estimator,
    RunSummary,
    StudyResult,
    run_studies,
    run_study,
    true_mean,
)
from .tables import emit_tables, peak_censoring, read_summaries, summaries_frame

__all__ = [
    "CONFIG_ECHO",
    "ESTIMATORS",
    "CellDiagnostics",
    "Estimator",
    "RunSummary",
    "StudyConfig",
    "StudyKind",
    "StudyResult",
    "config_from_dict",
    "dump_config",
    "emit_tables",
    "load_config",
    "peak_censoring",
    "read_summaries",
    "run_studies",
    "run_study",
    "summaries_frame",
    "true_mean",
]
