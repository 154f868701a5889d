"""Simulation data generators, distributions and censoring calibration."""

from .calibration import (
    CensorFamily,
    calibrate_aft_censoring,
    calibrate_censoring,
    censoring_probability,
)
from .distributions import AftDesign, DistFamily, DistSpec
from .generators import (
    MAX_ATTEMPTS,
    SKEWED_STUDY,
    Constraint,
    GeneratedDataset,
    gen_aft,
    gen_koziol_green,
    gen_skewed,
    resolve_skewed,
)
from .streams import as_generator, replication_rng

__all__ = [
    "AftDesign",
    "CensorFamily",
    "Constraint",
    "DistFamily",
    "DistSpec",
    "GeneratedDataset",
    "MAX_ATTEMPTS",
    "SKEWED_STUDY",
    "as_generator",
    "calibrate_aft_censoring",
    "calibrate_censoring",
    "censoring_probability",
    "gen_aft",
    "gen_koziol_green",
    "gen_skewed",
    "replication_rng",
    "resolve_skewed",
]
