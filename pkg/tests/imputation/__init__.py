"""Sample builders for the imputation tests."""

import numpy as np

from kmjack.km_core import OrderedSample


def aft_sample(
    rng: np.random.Generator,
    n: int,
    beta=(1.0, -0.5),
    alpha: float = 0.5,
    sigma: float = 1.0,
    censor_low: float | None = None,
) -> tuple[np.ndarray, OrderedSample]:
    """Log-normal AFT data, returned as (covariates aligned with the sample, sample).

    Without ``censor_low`` nothing is censored; otherwise log censoring times
    are uniform on ``(censor_low, 2 * censor_low)``.
    """
    beta = np.asarray(beta, dtype=float)
    X = rng.normal(size=(n, beta.size))
    log_t = alpha + X @ beta + sigma * rng.normal(size=n)
    if censor_low is None:
        s = OrderedSample.from_arrays(np.exp(log_t), np.ones(n, dtype=np.int8))
    else:
        log_c = rng.uniform(censor_low, 2 * censor_low, n)
        s = OrderedSample.from_arrays(np.exp(np.minimum(log_t, log_c)), log_t <= log_c)
    return X[s.order], s


def censor_last(s: OrderedSample) -> OrderedSample:
    """The same sample with its largest datum marked censored."""
    statuses = s.statuses.copy()
    statuses[-1] = 0
    return OrderedSample(s.times, statuses, order=s.order)
