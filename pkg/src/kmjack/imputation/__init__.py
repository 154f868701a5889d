"""Imputation of a censored largest observation.

Six strategies are available: Efron's reclassification, the predicted
difference ``Y(n) + nu`` (random censorship only), and four methods based on
a log-normal AFT regression of lifetimes on covariates (conditional mean and
median, each optionally averaged over bootstrap refits).
"""

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

from kmjack.errors import ConfigurationError
from kmjack.km_core import OrderedSample

from .aft import (
    AftFit,
    conditional_mean_time,
    conditional_median_time,
    fit_aft_stute,
    impute_conditional_mean,
    impute_conditional_median,
    impute_from_resamples,
    impute_resampled,
    inverse_mills_ratio,
    truncated_normal_median,
)
from .tail import (
    DEFAULT_GAP_FRACTION,
    efron_reclassify,
    impute_predicted_difference,
    predicted_difference,
)
from .types import ImputedSample

Imputer = Callable[[OrderedSample], ImputedSample]


class ImputationVariant(Enum):
    EFRON = "efron"
    PREDICTED_DIFFERENCE = "predicted_difference"
    CONDITIONAL_MEAN = "conditional_mean"
    CONDITIONAL_MEDIAN = "conditional_median"
    RESAMPLED_MEAN = "resampled_mean"
    RESAMPLED_MEDIAN = "resampled_median"

    @property
    def requires_covariates(self) -> bool:
        return self not in (ImputationVariant.EFRON, ImputationVariant.PREDICTED_DIFFERENCE)

    @classmethod
    def from_name(cls, name: str) -> "ImputationVariant":
        """Look up a variant by value or by its short tag (``w_nu``, ``w_tau_star_m``, ...)."""
        key = name.strip().lower().replace("-", "_")
        key = _ALIASES.get(key, key)
        try:
            return cls(key)
        except ValueError:
            valid = sorted({v.value for v in cls} | set(_ALIASES))
            raise ConfigurationError(f"Unknown imputation method '{name}'. Valid options: {valid}")


_ALIASES = {
    "w_nu": "predicted_difference",
    "w_tau_m": "conditional_mean",
    "w_tau_md": "conditional_median",
    "w_tau_star_m": "resampled_mean",
    "w_tau_star_md": "resampled_median",
}


@dataclass(frozen=True)
class ImputationMethod:
    """An imputation strategy and its tuning parameters."""

    variant: ImputationVariant = ImputationVariant.PREDICTED_DIFFERENCE
    resample_count: int = 100
    gap_fraction: float = DEFAULT_GAP_FRACTION
    seed: int | None = None

    def __post_init__(self) -> None:
        if isinstance(self.variant, str):
            object.__setattr__(self, "variant", ImputationVariant.from_name(self.variant))
        if self.resample_count < 1:
            raise ConfigurationError(f"resample_count must be >= 1, got {self.resample_count}")
        if not 0 < self.gap_fraction <= 1:
            raise ConfigurationError(f"gap_fraction must lie in (0, 1], got {self.gap_fraction}")

    @property
    def tag(self) -> str:
        return self.variant.value


def build_imputer(method: ImputationMethod, covariates=None, seed=None) -> Imputer:
    """Bind a method (and covariates aligned with the sample) into an imputer.

    Args:
        method: The strategy.
        covariates: ``n x p`` covariates aligned with the ordered sample the
            imputer will be applied to. Required by the AFT-based variants.
        seed: Resampling seed; overrides ``method.seed`` when given.

    Raises:
        ConfigurationError: If an AFT-based variant is requested without covariates.
    """
    variant = method.variant
    if variant.requires_covariates and covariates is None:
        raise ConfigurationError(f"imputation method '{variant.value}' requires covariates")
    seed = method.seed if seed is None else seed

    match variant:
        case ImputationVariant.EFRON:
            return efron_reclassify
        case ImputationVariant.PREDICTED_DIFFERENCE:
            return lambda s: impute_predicted_difference(s, method.gap_fraction)
        case ImputationVariant.CONDITIONAL_MEAN:
            return lambda s: impute_conditional_mean(fit_aft_stute(covariates, s), s)
        case ImputationVariant.CONDITIONAL_MEDIAN:
            return lambda s: impute_conditional_median(fit_aft_stute(covariates, s), s)
        case ImputationVariant.RESAMPLED_MEAN:
            return lambda s: impute_resampled("mean", covariates, s, method.resample_count, seed)
        case ImputationVariant.RESAMPLED_MEDIAN:
            return lambda s: impute_resampled("median", covariates, s, method.resample_count, seed)


__all__ = [
    "AftFit",
    "DEFAULT_GAP_FRACTION",
    "ImputationMethod",
    "ImputationVariant",
    "ImputedSample",
    "Imputer",
    "build_imputer",
    "conditional_mean_time",
    "conditional_median_time",
    "efron_reclassify",
    "fit_aft_stute",
    "impute_conditional_mean",
    "impute_conditional_median",
    "impute_from_resamples",
    "impute_predicted_difference",
    "impute_resampled",
    "inverse_mills_ratio",
    "predicted_difference",
    "truncated_normal_median",
]
