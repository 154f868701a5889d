"""Delete-1 jackknife bias of K-M integrals and its tail-imputed modification.

The delete-1 jackknife bias of a K-M integral has the closed form

    bias = -((n - 1) / n) * phi(Y(n)) * d(n) * (1 - d(n-1)) * P,
    P    = prod_{j=1}^{n-2} ((n - 1 - j) / (n - j)) ** d(j),

which vanishes unless the largest datum is an event and the second largest is
censored. When the largest datum is censored, it is replaced by an imputed
value ``Y~(n)`` with indicator 1 and the same formula is applied to the
modified estimator, whose last weight absorbs the adjustment
``((n - 1) / n) * P`` when ``d(n-1) = 0``.

The four censoring patterns of the last two observations dispatch as follows:

    (d(n-1), d(n))   estimate
    (1, 1)           S                     (bias 0)
    (0, 1)           S - bias              (original correction)
    (1, 0)           S*                    (bias 0)
    (0, 0)           S* - bias*            (modified correction)
"""

import logging
from dataclasses import dataclass

import numpy as np

from kmjack.errors import CaseError, ConfigurationError
from kmjack.imputation import ImputedSample, Imputer
from kmjack.km_core import (
    Integrand,
    OrderedSample,
    evaluate_weighted,
    identity,
    km_integral,
    km_weights,
    survival_factors,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EstimateBundle:
    """A K-M integral estimate, its jackknife bias and the corrected value."""

    s_hat: float
    bias: float
    s_tilde: float
    modified: bool
    case: tuple[int, int]
    imputed_time: float | None = None
    method_tag: str | None = None

    def __post_init__(self) -> None:
        if self.s_tilde != self.s_hat - self.bias:
            raise ValueError("s_tilde must equal s_hat - bias")

    @classmethod
    def build(cls, s_hat: float, bias: float, **kwargs) -> "EstimateBundle":
        return cls(s_hat=s_hat, bias=bias, s_tilde=s_hat - bias, **kwargs)


def tail_product(s: OrderedSample) -> float:
    """prod_{j=1}^{n-2} ((n - 1 - j) / (n - j)) ** d(j); 1 when n = 2."""
    n = s.n
    j = np.arange(1, n - 1)
    factors = np.where(s.statuses[: n - 2] == 1, (n - 1 - j) / (n - j), 1.0)
    return float(np.prod(factors))


def _phi_at(phi: Integrand, y: float) -> float:
    return float(evaluate_weighted(phi, np.array([y], dtype=float))[0])


def _tail_bias(s: OrderedSample, phi_value: float) -> float:
    n = s.n
    return -((n - 1) / n) * phi_value * tail_product(s)


def jackknife_bias(s: OrderedSample, phi: Integrand = identity) -> float:
    """Delete-1 jackknife estimate of the bias of the K-M integral."""
    if s.case != (0, 1):
        return 0.0
    return _tail_bias(s, _phi_at(phi, s.times[-1]))


def corrected_estimate(s: OrderedSample, phi: Integrand = identity) -> EstimateBundle:
    """K-M integral with the original jackknife bias correction."""
    s_hat = km_integral(s, phi)
    bias = jackknife_bias(s, phi)
    return EstimateBundle.build(s_hat, bias, modified=False, case=s.case)


def _reclassified_last_weight(s: OrderedSample) -> float:
    # w(n) with d(n) = 1 is the survival just before Y(n).
    return float(np.prod(survival_factors(s.statuses)[:-1]))


def adjusted_last_weight(s: OrderedSample, reclassify: bool = True) -> float:
    """Adjusted last K-M weight ``w(n) + ((n - 1) / n) * P``.

    Args:
        s: The ordered sample.
        reclassify: Compute ``w(n)`` as if the largest datum were an event.
            With ``False`` the observed indicator is used, so a censored
            largest datum contributes ``w(n) = 0``.
    """
    n = s.n
    if reclassify or s.statuses[-1] == 1:
        w_n = _reclassified_last_weight(s)
    else:
        w_n = 0.0
    return w_n + ((n - 1) / n) * tail_product(s)


def modified_estimates(
    s: OrderedSample,
    imp: ImputedSample,
    phi: Integrand = identity,
    reclassify: bool = True,
) -> EstimateBundle:
    """Modified estimator, bias and corrected estimator for a censored largest datum.

    Raises:
        CaseError: If the largest datum of ``s`` is an event.
        ValueError: If ``imp`` was not imputed from ``s``.
    """
    if s.statuses[-1] == 1:
        raise CaseError("the modified estimator applies only when the largest datum is censored")
    if not imp.base.matches(s):
        raise ValueError("imputed sample does not belong to this sample")

    weights = km_weights(s).weights[:-1]
    head = s.times[:-1][weights > 0]
    values = evaluate_weighted(phi, head)
    s_head = float(np.dot(weights[weights > 0], values))
    phi_imputed = _phi_at(phi, imp.imputed_time)

    if s.statuses[-2] == 0:
        last_weight = adjusted_last_weight(s, reclassify=reclassify)
        bias = _tail_bias(s, phi_imputed) * imp.imputed_status
    else:
        last_weight = _reclassified_last_weight(s) if reclassify else 0.0
        bias = 0.0

    s_hat = s_head + last_weight * phi_imputed
    logger.debug(
        "modified estimate case=%s imputed=%.6g weight=%.6g", s.case, imp.imputed_time, last_weight
    )
    return EstimateBundle.build(
        s_hat,
        bias,
        modified=True,
        case=s.case,
        imputed_time=imp.imputed_time,
        method_tag=imp.method_tag,
    )


def estimate_by_case(
    s: OrderedSample,
    phi: Integrand = identity,
    imputer: Imputer | None = None,
    reclassify: bool = True,
) -> EstimateBundle:
    """Dispatch on (d(n-1), d(n)) to the original or the modified estimator.

    Raises:
        ConfigurationError: If the largest datum is censored and no imputer is given.
    """
    if s.statuses[-1] == 1:
        return corrected_estimate(s, phi)
    if imputer is None:
        raise ConfigurationError(
            "the largest observation is censored; an imputation method is required"
        )
    return modified_estimates(s, imputer(s), phi, reclassify=reclassify)
