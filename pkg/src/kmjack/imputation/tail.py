"""Imputations of a censored largest datum that need no covariates."""

import logging
import math

import numpy as np

from kmjack.errors import InsufficientDataError, NotApplicableError
from kmjack.imputation.types import ImputedSample
from kmjack.km_core import OrderedSample

logger = logging.getLogger(__name__)

DEFAULT_GAP_FRACTION = 0.25


def _require_censored_last(s: OrderedSample) -> None:
    if s.statuses[-1] != 0:
        raise NotApplicableError("the largest datum is already an event; nothing to impute")


def efron_reclassify(s: OrderedSample) -> ImputedSample:
    """Efron's tail correction: keep ``Y(n)`` and count it as an event."""
    _require_censored_last(s)
    return ImputedSample(base=s, imputed_time=float(s.times[-1]), method_tag="efron")


def _mean_distinct_gap(times: np.ndarray) -> float | None:
    distinct = np.unique(times)
    if distinct.size < 2:
        return None
    return float(np.mean(np.diff(distinct)))


def predicted_difference(s: OrderedSample, q: float = DEFAULT_GAP_FRACTION) -> float:
    """The gap ``nu`` added to ``Y(n)`` by the predicted-difference imputation.

    ``nu`` is the mean gap between consecutive distinct uncensored order
    statistics among the top ``ceil(q * n)`` observations. If that window
    holds fewer than two distinct event times, the whole sample is used.
    """
    if not 0 < q <= 1:
        raise ValueError(f"gap fraction must lie in (0, 1], got {q!r}")
    events = s.times[s.statuses == 1]
    if events.size < 2:
        raise InsufficientDataError(
            f"at least two uncensored observations are required, got {events.size}"
        )

    k = math.ceil(q * s.n)
    window = s.times[-k:][s.statuses[-k:] == 1]
    nu = _mean_distinct_gap(window)
    if nu is None:
        logger.debug("upper window of %d holds < 2 distinct events; using all events", k)
        nu = _mean_distinct_gap(events)
    if nu is None:
        raise InsufficientDataError("uncensored observations share a single time; no gap to predict")
    return nu


def impute_predicted_difference(
    s: OrderedSample, q: float = DEFAULT_GAP_FRACTION
) -> ImputedSample:
    """Replace a censored ``Y(n)`` by ``Y(n) + nu`` (see :func:`predicted_difference`)."""
    _require_censored_last(s)
    nu = predicted_difference(s, q)
    return ImputedSample(
        base=s, imputed_time=float(s.times[-1]) + nu, method_tag="predicted_difference"
    )
