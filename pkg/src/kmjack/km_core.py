"""Ordered censored samples, Kaplan-Meier jump weights and K-M integrals.

The K-M estimate of the lifetime distribution puts mass only on uncensored
order statistics. With ``n`` observations sorted as ``Y(1) <= ... <= Y(n)``
and censoring indicators ``d(i)``, the survival estimate is

    S(t) = prod_{Y(i) <= t} ((n - i) / (n - i + 1)) ** d(i)

and the jump at ``Y(i)`` is

    w(i) = d(i) / (n - i + 1) * prod_{j < i} ((n - j) / (n - j + 1)) ** d(j).

A K-M integral of an integrand ``phi`` is ``sum_i w(i) * phi(Y(i))``.
"""

import logging
import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass

import numpy as np

from kmjack.errors import DomainError, EvaluationError, SampleSizeError

logger = logging.getLogger(__name__)

# Integrands are applied elementwise to arrays of observation times, numpy style.
Integrand = Callable[[np.ndarray], np.ndarray]


def identity(y: np.ndarray) -> np.ndarray:
    """The identity integrand; its K-M integral is the K-M mean lifetime."""
    return y


@dataclass(frozen=True)
class Observation:
    """A single right-censored observation ``Y = min(T, C)`` with ``status = 1{T <= C}``."""

    time: float
    status: int

    def __post_init__(self) -> None:
        try:
            time = float(self.time)
        except (TypeError, ValueError):
            raise DomainError(f"Invalid time {self.time!r}: must be a real number")
        if not math.isfinite(time) or time < 0:
            raise DomainError(f"Invalid time {self.time!r}: must be finite and >= 0")
        if self.status not in (0, 1):
            raise DomainError(f"Invalid status {self.status!r}. Must be one of {{0, 1}}")
        object.__setattr__(self, "time", time)
        object.__setattr__(self, "status", int(self.status))


@dataclass(frozen=True, eq=False)
class OrderedSample:
    """Observation times in ascending order with their censoring indicators.

    At equal times every event precedes every censoring. ``order`` holds the
    permutation that produced this ordering from the raw input, so that
    covariate rows can be aligned with the sorted sample.
    """

    times: np.ndarray
    statuses: np.ndarray
    order: np.ndarray | None = None

    def __post_init__(self) -> None:
        times = np.array(self.times, dtype=float)
        statuses = np.array(self.statuses, dtype=np.int8)
        _check_raw(times, statuses)

        steps = np.diff(times)
        if np.any(steps < 0):
            raise DomainError("times must be nondecreasing")
        tied = steps == 0
        if np.any(tied & (statuses[:-1] < statuses[1:])):
            raise DomainError("at equal times events must precede censored observations")

        order = np.arange(times.size) if self.order is None else np.array(self.order)
        if order.shape != times.shape:
            raise ValueError("order must have one entry per observation")

        for name, value in (("times", times), ("statuses", statuses), ("order", order)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @classmethod
    def from_arrays(cls, times, statuses) -> "OrderedSample":
        """Sort raw times/statuses by (time ascending, status descending), stably."""
        times = np.asarray(times, dtype=float)
        statuses = np.asarray(statuses)
        _check_raw(times, statuses)
        # lexsort is stable and sorts by the last key first
        order = np.lexsort((-statuses.astype(np.int8), times))
        return cls(times[order], statuses[order], order=order)

    @property
    def n(self) -> int:
        return int(self.times.size)

    def __len__(self) -> int:
        return self.n

    @property
    def case(self) -> tuple[int, int]:
        """The pair (d(n-1), d(n)) that selects the jackknife formula."""
        return int(self.statuses[-2]), int(self.statuses[-1])

    @property
    def censored_fraction(self) -> float:
        return float(1.0 - self.statuses.mean())

    def matches(self, other: "OrderedSample") -> bool:
        """Whether ``other`` holds the same ordered times and indicators."""
        return np.array_equal(self.times, other.times) and np.array_equal(
            self.statuses, other.statuses
        )


@dataclass(frozen=True, eq=False)
class WeightVector:
    """K-M jump weights; censored observations carry zero weight."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=float)
        if np.any(weights < 0):
            raise ValueError("K-M weights must be nonnegative")
        tolerance = 1e-12 * weights.size
        if weights.sum() > 1.0 + tolerance:
            raise ValueError(f"K-M weights exceed unit mass: {weights.sum()!r}")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @property
    def mass(self) -> float:
        return float(self.weights.sum())


def _check_raw(times: np.ndarray, statuses: np.ndarray) -> None:
    if times.ndim != 1 or statuses.shape != times.shape:
        raise ValueError("times and statuses must be one-dimensional and of equal length")
    if times.size < 2:
        raise SampleSizeError(f"At least 2 observations are required, got {times.size}")
    if not np.all(np.isfinite(times)) or np.any(times < 0):
        raise DomainError("times must be finite and >= 0")
    if not np.all((statuses == 0) | (statuses == 1)):
        raise DomainError("statuses must be 0 (censored) or 1 (event)")


def order_sample(raw: Iterable[Observation | tuple[float, int]]) -> OrderedSample:
    """Build an :class:`OrderedSample` from raw observations.

    Args:
        raw: Observations, either :class:`Observation` instances or
            ``(time, status)`` pairs.

    Returns:
        The sample sorted by time ascending and, at equal times, events first.
        Remaining ties keep their input order.

    Raises:
        SampleSizeError: If fewer than two observations are given.
        DomainError: If a time is NaN, negative or infinite, or a status is not 0/1.
    """
    raw = list(raw)
    if len(raw) < 2:
        raise SampleSizeError(f"At least 2 observations are required, got {len(raw)}")
    observations = [item if isinstance(item, Observation) else Observation(*item) for item in raw]
    times = np.array([o.time for o in observations], dtype=float)
    statuses = np.array([o.status for o in observations], dtype=np.int8)
    return OrderedSample.from_arrays(times, statuses)


def survival_factors(statuses: np.ndarray) -> np.ndarray:
    """Per-observation product-limit factors ((n - i) / (n - i + 1)) ** d(i)."""
    n = statuses.size
    i = np.arange(1, n + 1)
    return np.where(statuses == 1, (n - i) / (n - i + 1), 1.0)


def km_weights(s: OrderedSample) -> WeightVector:
    """Jump sizes of the K-M distribution estimate at each order statistic."""
    n = s.n
    i = np.arange(1, n + 1)
    survival = np.cumprod(survival_factors(s.statuses))
    before = np.concatenate(([1.0], survival[:-1]))
    weights = np.where(s.statuses == 1, before / (n - i + 1), 0.0)
    return WeightVector(weights)


def km_survival(s: OrderedSample, t: float) -> float:
    """Right-continuous K-M survival estimate ``1 - F(t)``."""
    if math.isnan(t):
        raise DomainError("t must not be NaN")
    k = int(np.searchsorted(s.times, t, side="right"))
    value = float(np.prod(survival_factors(s.statuses)[:k]))
    return min(max(value, 0.0), 1.0)


def km_survival_curve(s: OrderedSample) -> tuple[np.ndarray, np.ndarray]:
    """Knots of the survival step function: distinct event times and S at each."""
    survival = np.cumprod(survival_factors(s.statuses))
    events = s.statuses == 1
    times, values = s.times[events], survival[events]
    last_of_tie = np.append(times[1:] != times[:-1], True)
    return times[last_of_tie], values[last_of_tie]


def evaluate_integrand(phi: Integrand, points: np.ndarray) -> np.ndarray:
    """Apply ``phi`` to ``points``, broadcasting constant integrands."""
    values = np.asarray(phi(points), dtype=float)
    if values.shape != points.shape:
        values = np.broadcast_to(values, points.shape)
    return values


def evaluate_weighted(phi: Integrand, points: np.ndarray) -> np.ndarray:
    """Apply ``phi`` at points carrying K-M mass, where NaN is an error."""
    values = evaluate_integrand(phi, points)
    if np.any(np.isnan(values)):
        raise EvaluationError("integrand returned NaN at a weighted observation")
    return values


def km_integral(s: OrderedSample, phi: Integrand = identity) -> float:
    """K-M integral ``sum_i w(i) * phi(Y(i))``.

    Raises:
        EvaluationError: If ``phi`` is NaN at an observation with positive weight.
    """
    weights = km_weights(s).weights
    weighted = weights > 0
    values = evaluate_weighted(phi, s.times[weighted])
    return float(np.dot(weights[weighted], values))


def km_mean(s: OrderedSample) -> float:
    """K-M mean lifetime (the K-M integral of the identity)."""
    return km_integral(s, identity)
