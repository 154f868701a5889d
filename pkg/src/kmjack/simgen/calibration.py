"""Censoring-level calibration.

For a lifetime ``T`` and an independent censoring time ``C`` from a
one-parameter family, find the parameter for which ``Pr(C < T) = p``.
"""

import logging
import math
from collections.abc import Callable
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy import integrate, optimize

from kmjack.errors import CalibrationError, DomainError
from kmjack.simgen.distributions import AftDesign, DistFamily, DistSpec

logger = logging.getLogger(__name__)

TOLERANCE = 1e-4
MAX_EXPANSIONS = 60
AFT_CALIBRATION_DRAWS = 200_000
AFT_CALIBRATION_SEED = 20130917


class CensorFamily(Enum):
    EXPONENTIAL = "exponential"  # C ~ Exp(lambda), parameter lambda
    UNIFORM_A2A = "uniform_a2a"  # C ~ U(a, 2a), parameter a

    def distribution(self, parameter: float) -> DistSpec:
        if self is CensorFamily.EXPONENTIAL:
            return DistSpec.exponential(parameter)
        return DistSpec.uniform(parameter, 2 * parameter)


def censoring_probability(lifetime: DistSpec, family: CensorFamily, parameter: float) -> float:
    """``Pr(C < T)`` by adaptive quadrature of the lifetime survival function."""
    if family is CensorFamily.UNIFORM_A2A:
        a = parameter
        value, _ = integrate.quad(lifetime.survival, a, 2 * a, limit=200)
        return value / a
    rate = parameter
    # Pr(C < T) = E[1 - exp(-rate * T)]
    return float(lifetime.frozen().expect(lambda t: -np.expm1(-rate * t)))


def _solve(probability: Callable[[float], float], p: float, start: float) -> float:
    """Find ``x > 0`` with ``probability(x) = p`` for a monotone ``probability``."""
    f = lambda x: probability(x) - p
    lo = hi = start
    # the sign of f near zero decides which way each end must move
    falling = probability(start / 1e6) > probability(start * 1e6)

    for _ in range(MAX_EXPANSIONS):
        if (f(lo) > 0) == falling:
            break
        lo /= 8
    else:
        raise CalibrationError(f"censoring level {p:g} is not attainable (lower bracket)")
    for _ in range(MAX_EXPANSIONS):
        if (f(hi) < 0) == falling:
            break
        hi *= 8
    else:
        raise CalibrationError(f"censoring level {p:g} is not attainable (upper bracket)")

    logger.debug("calibration bracket [%g, %g] for p=%g", lo, hi, p)
    root = optimize.bisect(f, lo, hi, xtol=1e-14, rtol=1e-12, maxiter=500)
    if abs(f(root)) > TOLERANCE:
        raise CalibrationError(f"calibration for p={p:g} ended {abs(f(root)):.2e} from target")
    return float(root)


def _check_level(p: float) -> None:
    if not 0 < p < 1:
        raise DomainError(f"censoring level must lie in (0, 1), got {p!r}")


@lru_cache(maxsize=256)
def calibrate_censoring(lifetime: DistSpec, censor_family: CensorFamily, p: float) -> float:
    """Censoring parameter giving censoring probability ``p``.

    Returns ``lambda`` for exponential censoring and ``a`` for U(a, 2a)
    censoring. Exponential lifetimes with exponential censoring use the
    closed form ``lambda = theta * p / (1 - p)``; every other pairing is solved
    by bisection on quadrature values.

    Raises:
        DomainError: If ``p`` is outside (0, 1).
        CalibrationError: If no bracket is found or the root misses the target.
    """
    _check_level(p)
    if censor_family is CensorFamily.EXPONENTIAL and lifetime.family is DistFamily.EXPONENTIAL:
        theta = lifetime.params[0]
        return theta * p / (1 - p)

    def probability(x: float) -> float:
        return censoring_probability(lifetime, censor_family, x)

    start = lifetime.mean() if lifetime.mean() > 0 else 1.0
    if censor_family is CensorFamily.EXPONENTIAL:
        start = 1.0 / start
    return _solve(probability, p, start)


@lru_cache(maxsize=64)
def _aft_log_times(design: AftDesign) -> np.ndarray:
    rng = np.random.default_rng(AFT_CALIBRATION_SEED)
    _, z = design.sample(rng, AFT_CALIBRATION_DRAWS)
    return z


@lru_cache(maxsize=256)
def calibrate_aft_censoring(design: AftDesign, p: float) -> float:
    """``a`` such that a log censoring time ``U(a, 2a)`` censors a fraction ``p``.

    The marginal law of the log lifetime is represented by a fixed draw; for
    each drawn ``z`` the censoring probability is exactly ``clip((z - a) / a, 0, 1)``.
    """
    _check_level(p)
    z = _aft_log_times(design)

    def probability(a: float) -> float:
        return float(np.mean(np.clip((z - a) / a, 0.0, 1.0)))

    start = float(np.median(z)) if np.median(z) > 0 else 1.0
    return _solve(probability, p, start)
