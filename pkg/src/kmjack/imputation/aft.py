"""Covariate-based imputation of a censored largest datum under a log-normal AFT model.

The model is ``log T = alpha + x' beta + sigma * eps`` with standard normal
errors. It is fitted by Stute's weighted least squares: squared residuals of
the log times are weighted by the K-M jump weights. Given the fit, a censored
``y(n)`` with covariates ``x(n)`` is imputed from the normal law of the log
lifetime truncated below at ``log y(n)``.
"""

import logging
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.stats import norm

from kmjack.errors import DomainError, NotApplicableError, RankError, ResamplingError
from kmjack.imputation.types import ImputedSample
from kmjack.km_core import OrderedSample, km_weights

logger = logging.getLogger(__name__)

SIGMA_MIN = 1e-8
# Variance factor of the fitted location at the imputation point, per unit error variance.
MAX_PREDICTION_VARIANCE = 25.0
# Above this standardized point the normal upper tail is replaced by its expansion.
ASYMPTOTIC_THRESHOLD = 8.0

Summary = Literal["mean", "median"]


@dataclass(frozen=True, eq=False)
class AftFit:
    """Weighted least-squares fit of a log-normal AFT model."""

    intercept: float
    coefficients: np.ndarray
    scale: float
    design: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self) -> None:
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale!r}")
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("coefficients must be finite")

    @property
    def p(self) -> int:
        return int(self.coefficients.size)

    def location(self, x) -> float:
        """Linear predictor ``alpha + x' beta`` on the log-time scale."""
        x = np.asarray(x, dtype=float).reshape(-1)
        return float(self.intercept + x @ self.coefficients)

    def prediction_variance(self, x) -> float:
        """Variance of ``location(x)`` under unit-variance errors on the weighted rows.

        About ``(p + 1) / m`` for a typical point among ``m`` equally weighted
        events; large when ``x`` is an extrapolation of a few dominant rows.
        """
        if self.weights is None:
            raise ValueError("fit carries no weights")
        x = np.asarray(x, dtype=float).reshape(-1)
        A = np.column_stack([np.ones(len(self.design)), self.design])
        gram = A.T @ (A * self.weights[:, None])
        g = (A @ np.linalg.solve(gram, np.concatenate([[1.0], x]))) * self.weights
        return float(g @ g)


def _as_design(X, n: int) -> np.ndarray:
    if X is None:
        return np.empty((n, 0))
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(n, -1) if X.size else np.empty((n, 0))
    if X.shape[0] != n:
        raise ValueError(f"covariate matrix has {X.shape[0]} rows for {n} observations")
    return X


def fit_aft_stute(X, s: OrderedSample) -> AftFit:
    """Fit ``log Y = alpha + X beta`` by K-M weighted least squares.

    Args:
        X: ``n x p`` covariates whose rows are aligned with the ordered sample
            (``None`` or ``p = 0`` fits an intercept only).
        s: The ordered sample.

    Returns:
        The fit; its scale is the square root of the weighted residual mean
        square over the uncensored observations, floored at ``SIGMA_MIN``.

    Raises:
        DomainError: If any time is not positive.
        RankError: If the weighted normal equations are singular, or fewer
            than ``p + 2`` distinct events carry weight.
    """
    design = _as_design(X, s.n)
    if np.any(s.times <= 0):
        raise DomainError("log-linear fitting requires positive times")

    weights = km_weights(s).weights
    z = np.log(s.times)
    A = np.column_stack([np.ones(s.n), design])
    root = np.sqrt(weights)
    coef, _, rank, _ = np.linalg.lstsq(A * root[:, None], z * root, rcond=None)
    if rank < A.shape[1]:
        raise RankError(f"weighted design has rank {rank} < {A.shape[1]}")
    fitted = (s.statuses == 1) & (weights > 0)
    distinct = len(np.unique(np.column_stack([design, z])[fitted], axis=0))
    if distinct < A.shape[1] + 1:
        raise RankError(
            f"{distinct} distinct weighted events cannot fit {A.shape[1]} coefficients and a scale"
        )

    residuals = z - A @ coef
    events = s.statuses == 1
    mass = weights[events].sum()
    variance = float(np.dot(weights[events], residuals[events] ** 2) / mass)
    scale = max(math.sqrt(variance), SIGMA_MIN)
    return AftFit(
        intercept=float(coef[0]),
        coefficients=coef[1:],
        scale=scale,
        design=design,
        weights=weights,
    )


def inverse_mills_ratio(a: float) -> float:
    """Mean of a standard normal truncated below at ``a``."""
    if a > ASYMPTOTIC_THRESHOLD:
        return a + 1.0 / a
    return float(norm.pdf(a) / norm.sf(a))


def truncated_normal_median(a: float) -> float:
    """Median of a standard normal truncated below at ``a``."""
    tail = float(norm.sf(a))
    if tail > 0:
        return float(norm.isf(tail / 2))
    # excess over a is asymptotically exponential with rate a
    return a + math.log(2.0) / a


def _standardize(fit: AftFit, x_n, y_n: float) -> tuple[float, float]:
    if not y_n > 0:
        raise DomainError(f"censored time must be positive, got {y_n!r}")
    mu = fit.location(x_n)
    return mu, (math.log(y_n) - mu) / fit.scale


def _above(value: float, y_n: float) -> float:
    return max(value, math.nextafter(y_n, math.inf))


def conditional_mean_time(fit: AftFit, x_n, y_n: float) -> float:
    """``exp(mu + sigma * lambda(a))``: conditional-mean imputed lifetime."""
    mu, a = _standardize(fit, x_n, y_n)
    return _above(math.exp(mu + fit.scale * inverse_mills_ratio(a)), y_n)


def conditional_median_time(fit: AftFit, x_n, y_n: float) -> float:
    """Lifetime at the conditional median of the truncated log-time law."""
    mu, a = _standardize(fit, x_n, y_n)
    return _above(math.exp(mu + fit.scale * truncated_normal_median(a)), y_n)


_SUMMARIES = {"mean": conditional_mean_time, "median": conditional_median_time}


def _check_prediction(fit: AftFit, x_n) -> None:
    variance = fit.prediction_variance(x_n)
    if not variance <= MAX_PREDICTION_VARIANCE:
        raise RankError(
            f"fitted location at the censored row has variance factor {variance:.3g}"
            f" > {MAX_PREDICTION_VARIANCE:g}"
        )


def _censored_last(s: OrderedSample) -> float:
    if s.statuses[-1] != 0:
        raise NotApplicableError("the largest datum is already an event; nothing to impute")
    return float(s.times[-1])


def impute_conditional_mean(fit: AftFit, s: OrderedSample, x_n=None) -> ImputedSample:
    """Impute the censored ``Y(n)`` by its conditional mean under ``fit``.

    ``x_n`` defaults to the last row of the fitted design.
    """
    y_n = _censored_last(s)
    x_n = fit.design[-1] if x_n is None else x_n
    _check_prediction(fit, x_n)
    return ImputedSample(
        base=s, imputed_time=conditional_mean_time(fit, x_n, y_n), method_tag="conditional_mean"
    )


def impute_conditional_median(fit: AftFit, s: OrderedSample, x_n=None) -> ImputedSample:
    """Impute the censored ``Y(n)`` by its conditional median under ``fit``."""
    y_n = _censored_last(s)
    x_n = fit.design[-1] if x_n is None else x_n
    _check_prediction(fit, x_n)
    return ImputedSample(
        base=s,
        imputed_time=conditional_median_time(fit, x_n, y_n),
        method_tag="conditional_median",
    )


def impute_from_resamples(
    variant: Summary, X, s: OrderedSample, index_sets: np.ndarray
) -> ImputedSample:
    """Average the conditional imputation of ``Y(n)`` over AFT fits on row resamples.

    Args:
        variant: ``"mean"`` or ``"median"``.
        X: Covariates aligned with ``s``.
        s: The ordered sample; its largest datum must be censored.
        index_sets: ``B x n`` row indices, one resample per row.

    Raises:
        ResamplingError: If more than half of the resamples cannot be fitted,
            or their fits cannot predict at the censored row.
    """
    y_n = _censored_last(s)
    design = _as_design(X, s.n)
    x_n = design[-1]
    imputed_time = _SUMMARIES[variant]

    values = []
    failures = 0
    for idx in np.atleast_2d(index_sets):
        resample = OrderedSample.from_arrays(s.times[idx], s.statuses[idx])
        try:
            fit = fit_aft_stute(design[idx][resample.order], resample)
            _check_prediction(fit, x_n)
            values.append(imputed_time(fit, x_n, y_n))
        except (RankError, OverflowError):
            failures += 1

    count = len(values) + failures
    if failures > count / 2:
        raise ResamplingError(f"{failures} of {count} resamples gave no usable fit")
    logger.debug("resampled %s imputation: %d fits, %d failures", variant, len(values), failures)
    return ImputedSample(
        base=s, imputed_time=float(np.mean(values)), method_tag=f"resampled_{variant}"
    )


def impute_resampled(
    variant: Summary, X, s: OrderedSample, B: int = 100, seed=None
) -> ImputedSample:
    """Bootstrap version of the conditional mean/median imputation.

    Rows of ``(X, time, status)`` are drawn with replacement, ``B`` times, from
    a generator seeded with ``seed``; the result is deterministic given it.
    """
    if B < 1:
        raise ValueError(f"resample count must be >= 1, got {B!r}")
    rng = np.random.default_rng(seed)
    index_sets = rng.integers(0, s.n, size=(B, s.n))
    return impute_from_resamples(variant, X, s, index_sets)
