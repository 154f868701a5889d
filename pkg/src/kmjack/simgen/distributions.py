"""Lifetime and censoring distributions used by the simulation studies."""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats
from scipy.special import gamma as gamma_fn

from kmjack.errors import DomainError


class DistFamily(Enum):
    EXPONENTIAL = "exponential"
    LOGNORMAL = "lognormal"
    GAMMA = "gamma"
    WEIBULL = "weibull"
    UNIFORM = "uniform"
    NORMAL = "normal"


_ARITY = {
    DistFamily.EXPONENTIAL: ("rate",),
    DistFamily.LOGNORMAL: ("meanlog", "sdlog"),
    DistFamily.GAMMA: ("shape", "rate"),
    DistFamily.WEIBULL: ("shape", "scale"),
    DistFamily.UNIFORM: ("lo", "hi"),
    DistFamily.NORMAL: ("mean", "sd"),
}


@dataclass(frozen=True)
class DistSpec:
    """A parametric distribution.

    Parameters follow the conventions of the constructors below: exponential
    and gamma use rates, Weibull uses shape and scale, and log-normal uses the
    mean and standard deviation of the log.
    """

    family: DistFamily
    params: tuple[float, ...]

    def __post_init__(self) -> None:
        names = _ARITY[self.family]
        params = tuple(float(v) for v in self.params)
        if len(params) != len(names):
            raise DomainError(f"{self.family.value} takes parameters {names}, got {params}")
        if not all(math.isfinite(v) for v in params):
            raise DomainError(f"{self.family.value} parameters must be finite, got {params}")
        match self.family:
            case DistFamily.UNIFORM:
                if not params[0] < params[1]:
                    raise DomainError(f"uniform requires lo < hi, got {params}")
            case DistFamily.LOGNORMAL | DistFamily.NORMAL:
                if not params[1] > 0:
                    raise DomainError(f"{self.family.value} requires a positive spread, got {params}")
            case _:
                if not all(v > 0 for v in params):
                    raise DomainError(f"{self.family.value} parameters must be > 0, got {params}")
        object.__setattr__(self, "params", params)

    @classmethod
    def exponential(cls, rate: float) -> "DistSpec":
        return cls(DistFamily.EXPONENTIAL, (rate,))

    @classmethod
    def lognormal(cls, meanlog: float, sdlog: float) -> "DistSpec":
        return cls(DistFamily.LOGNORMAL, (meanlog, sdlog))

    @classmethod
    def gamma(cls, shape: float, rate: float) -> "DistSpec":
        return cls(DistFamily.GAMMA, (shape, rate))

    @classmethod
    def weibull(cls, shape: float, scale: float) -> "DistSpec":
        return cls(DistFamily.WEIBULL, (shape, scale))

    @classmethod
    def uniform(cls, lo: float, hi: float) -> "DistSpec":
        return cls(DistFamily.UNIFORM, (lo, hi))

    @classmethod
    def normal(cls, mean: float, sd: float) -> "DistSpec":
        return cls(DistFamily.NORMAL, (mean, sd))

    @property
    def label(self) -> str:
        args = ", ".join(f"{v:g}" for v in self.params)
        return f"{self.family.value}({args})"

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        a, *rest = self.params
        b = rest[0] if rest else None
        match self.family:
            case DistFamily.EXPONENTIAL:
                return rng.exponential(1.0 / a, size)
            case DistFamily.LOGNORMAL:
                return rng.lognormal(a, b, size)
            case DistFamily.GAMMA:
                return rng.gamma(a, 1.0 / b, size)
            case DistFamily.WEIBULL:
                return b * rng.weibull(a, size)
            case DistFamily.UNIFORM:
                return rng.uniform(a, b, size)
            case DistFamily.NORMAL:
                return rng.normal(a, b, size)

    def frozen(self):
        """The equivalent frozen ``scipy.stats`` distribution."""
        a, *rest = self.params
        b = rest[0] if rest else None
        match self.family:
            case DistFamily.EXPONENTIAL:
                return stats.expon(scale=1.0 / a)
            case DistFamily.LOGNORMAL:
                return stats.lognorm(s=b, scale=math.exp(a))
            case DistFamily.GAMMA:
                return stats.gamma(a, scale=1.0 / b)
            case DistFamily.WEIBULL:
                return stats.weibull_min(a, scale=b)
            case DistFamily.UNIFORM:
                return stats.uniform(loc=a, scale=b - a)
            case DistFamily.NORMAL:
                return stats.norm(loc=a, scale=b)

    def survival(self, t):
        return self.frozen().sf(t)

    def mean(self) -> float:
        a, *rest = self.params
        b = rest[0] if rest else None
        match self.family:
            case DistFamily.EXPONENTIAL:
                return 1.0 / a
            case DistFamily.LOGNORMAL:
                return math.exp(a + b * b / 2)
            case DistFamily.GAMMA:
                return a / b
            case DistFamily.WEIBULL:
                return b * float(gamma_fn(1 + 1 / a))
            case DistFamily.UNIFORM:
                return (a + b) / 2
            case DistFamily.NORMAL:
                return a

    def variance(self) -> float:
        a, *rest = self.params
        b = rest[0] if rest else None
        match self.family:
            case DistFamily.EXPONENTIAL:
                return 1.0 / (a * a)
            case DistFamily.LOGNORMAL:
                return math.expm1(b * b) * math.exp(2 * a + b * b)
            case DistFamily.GAMMA:
                return a / (b * b)
            case DistFamily.WEIBULL:
                g1, g2 = float(gamma_fn(1 + 1 / a)), float(gamma_fn(1 + 2 / a))
                return b * b * (g2 - g1 * g1)
            case DistFamily.UNIFORM:
                return (b - a) ** 2 / 12
            case DistFamily.NORMAL:
                return b * b


@dataclass(frozen=True)
class AftDesign:
    """Log-normal AFT model ``log T = alpha + X beta + sigma * eps`` with U(0, 1) covariates."""

    alpha: float = 0.0
    beta: tuple[float, ...] = (2.0, 3.0, 4.0, 5.0, 6.0)
    sigma: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")

    @property
    def p(self) -> int:
        return len(self.beta)

    def sample(self, rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Draw covariates and log lifetimes for ``n`` subjects."""
        X = rng.uniform(0.0, 1.0, size=(n, self.p))
        z = self.alpha + X @ np.asarray(self.beta) + self.sigma * rng.standard_normal(n)
        return X, z

    def mean(self) -> float:
        """E[T] = exp(alpha + sigma^2 / 2) * prod_j E[exp(beta_j U)]."""
        factors = [math.expm1(b) / b if b != 0 else 1.0 for b in self.beta]
        return math.exp(self.alpha + self.sigma**2 / 2) * math.prod(factors)
