"""Seeded generation of right-censored datasets for the simulation studies."""

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np

from kmjack.errors import ConfigurationError, InfeasibleConstraintError, SampleSizeError
from kmjack.km_core import OrderedSample
from kmjack.simgen.calibration import CensorFamily, calibrate_aft_censoring, calibrate_censoring
from kmjack.simgen.distributions import AftDesign, DistSpec
from kmjack.simgen.streams import as_generator

logger = logging.getLogger(__name__)

# A constraint that no dataset meets within this many attempts is treated as infeasible.
MAX_ATTEMPTS = 100_000

KOZIOL_GREEN_LIFETIME = DistSpec.exponential(1.0)

# Lifetime distributions of the skewed-distribution study with their censoring families.
SKEWED_STUDY: dict[str, tuple[DistSpec, CensorFamily]] = {
    "lognormal": (DistSpec.lognormal(1.1, 1.0), CensorFamily.UNIFORM_A2A),
    "exponential": (DistSpec.exponential(0.2), CensorFamily.EXPONENTIAL),
    "gamma": (DistSpec.gamma(4.0, 1.0), CensorFamily.UNIFORM_A2A),
    "weibull": (DistSpec.weibull(3.0, 38.96 ** (1 / 3)), CensorFamily.UNIFORM_A2A),
}


class Constraint(Enum):
    NONE = "none"
    SECOND_LAST_CENSORED = "second_last_censored"
    SECOND_LAST_CENSORED_AND_LAST_UNCENSORED = "second_last_censored_and_last_uncensored"

    def accepts(self, s: OrderedSample) -> bool:
        match self:
            case Constraint.NONE:
                return True
            case Constraint.SECOND_LAST_CENSORED:
                return s.statuses[-2] == 0
            case Constraint.SECOND_LAST_CENSORED_AND_LAST_UNCENSORED:
                return s.case == (0, 1)


@dataclass(frozen=True, eq=False)
class GeneratedDataset:
    """A simulated censored sample with the analytic mean of its lifetime law."""

    sample: OrderedSample
    true_mean: float
    target_censoring: float
    covariates: np.ndarray | None = None
    constraint: Constraint = Constraint.NONE
    attempts: int = 1

    def __post_init__(self) -> None:
        if not (math.isfinite(self.true_mean) and self.true_mean > 0):
            raise ValueError(f"true mean must be finite and positive, got {self.true_mean!r}")

    @property
    def second_last_censored(self) -> bool:
        return bool(self.sample.statuses[-2] == 0)

    @property
    def last_uncensored(self) -> bool:
        return bool(self.sample.statuses[-1] == 1)


def _check(n: int, p: float) -> None:
    if n < 2:
        raise SampleSizeError(f"n must be >= 2, got {n}")
    if not 0 <= p < 1:
        raise ConfigurationError(f"censoring level must lie in [0, 1), got {p!r}")


def _censor(t: np.ndarray, c: np.ndarray) -> OrderedSample:
    return OrderedSample.from_arrays(np.minimum(t, c), (t <= c).astype(np.int8))


def _draw_until(
    draw: Callable[[], tuple[OrderedSample, np.ndarray | None]], constraint: Constraint
) -> tuple[OrderedSample, np.ndarray | None, int]:
    """Regenerate whole datasets until ``constraint`` accepts one."""
    for attempt in range(1, MAX_ATTEMPTS + 1):
        sample, covariates = draw()
        if constraint.accepts(sample):
            if attempt > 1:
                logger.debug("constraint %s met after %d attempts", constraint.value, attempt)
            return sample, covariates, attempt
    raise InfeasibleConstraintError(
        f"no dataset satisfied '{constraint.value}' in {MAX_ATTEMPTS} attempts"
    )


def _lifetime_dataset(
    lifetime: DistSpec,
    family: CensorFamily,
    n: int,
    p: float,
    seed,
    constraint: Constraint,
) -> GeneratedDataset:
    _check(n, p)
    rng = as_generator(seed)
    censoring = family.distribution(calibrate_censoring(lifetime, family, p)) if p > 0 else None

    def draw() -> tuple[OrderedSample, None]:
        t = lifetime.sample(rng, n)
        c = censoring.sample(rng, n) if censoring else np.full(n, np.inf)
        return _censor(t, c), None

    sample, _, attempts = _draw_until(draw, constraint)
    return GeneratedDataset(
        sample=sample,
        true_mean=lifetime.mean(),
        target_censoring=p,
        constraint=constraint,
        attempts=attempts,
    )


def gen_koziol_green(
    n: int, p: float, seed=None, constraint: Constraint = Constraint.NONE
) -> GeneratedDataset:
    """``T ~ Exp(1)`` censored by ``C ~ Exp(p / (1 - p))``; ``p = 0`` means no censoring."""
    return _lifetime_dataset(
        KOZIOL_GREEN_LIFETIME, CensorFamily.EXPONENTIAL, n, p, seed, constraint
    )


def resolve_skewed(dist: str | tuple[DistSpec, CensorFamily]) -> tuple[DistSpec, CensorFamily]:
    if isinstance(dist, tuple):
        return dist
    try:
        return SKEWED_STUDY[dist.lower()]
    except KeyError:
        raise ConfigurationError(
            f"Unknown distribution '{dist}'. Valid options: {list(SKEWED_STUDY)}"
        )


def gen_skewed(
    dist: str | tuple[DistSpec, CensorFamily],
    n: int,
    p: float,
    seed=None,
    constraint: Constraint = Constraint.NONE,
) -> GeneratedDataset:
    """A skewed-lifetime dataset with the paired censoring family, drawn under ``constraint``.

    Args:
        dist: A key of :data:`SKEWED_STUDY` or an explicit (lifetime, censoring family) pair.
        n: Sample size.
        p: Target censoring probability.
        seed: Seed or ``numpy.random.Generator``.
        constraint: Acceptance rule on the last two censoring indicators.

    Raises:
        InfeasibleConstraintError: If no draw satisfies ``constraint`` within ``MAX_ATTEMPTS``.
    """
    lifetime, family = resolve_skewed(dist)
    return _lifetime_dataset(lifetime, family, n, p, seed, constraint)


def gen_aft(
    n: int,
    p: float,
    seed=None,
    design: AftDesign = AftDesign(),
    constraint: Constraint = Constraint.NONE,
) -> GeneratedDataset:
    """A log-normal AFT dataset with U(0, 1) covariates and ``log C ~ U(a, 2a)``.

    Covariate rows of the result are aligned with the ordered sample.
    """
    _check(n, p)
    rng = as_generator(seed)
    a = calibrate_aft_censoring(design, p) if p > 0 else None

    def draw() -> tuple[OrderedSample, np.ndarray]:
        X, z = design.sample(rng, n)
        log_c = rng.uniform(a, 2 * a, n) if a else np.full(n, np.inf)
        sample = _censor(np.exp(z), np.exp(log_c))
        return sample, X[sample.order]

    sample, covariates, attempts = _draw_until(draw, constraint)
    return GeneratedDataset(
        sample=sample,
        true_mean=design.mean(),
        target_censoring=p,
        covariates=covariates,
        constraint=constraint,
        attempts=attempts,
    )
