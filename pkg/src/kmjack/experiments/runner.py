"""Monte-Carlo study runner.

Each cell ``(n, p)`` of a study grid draws ``R`` datasets, evaluates the four
estimators of the mean lifetime on each and reduces them, in replication
order, to bias and variance summaries. Replication ``r`` uses the random
streams derived from ``(seed, n, p, r)``, so the output does not depend on the
number of worker threads.
"""

import logging
import math
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from kmjack.errors import ConfigurationError, DomainError, NumericalError
from kmjack.imputation import build_imputer
from kmjack.jackknife import EstimateBundle, corrected_estimate, estimate_by_case
from kmjack.km_core import identity
from kmjack.messaging import (
    CellFinishedMessage,
    CellStartedMessage,
    MessageReceiver,
    StudyFinishedMessage,
    StudyStartedMessage,
)
from kmjack.simgen import (
    SKEWED_STUDY,
    AftDesign,
    CensorFamily,
    Constraint,
    DistSpec,
    GeneratedDataset,
    calibrate_aft_censoring,
    calibrate_censoring,
    gen_aft,
    gen_koziol_green,
    gen_skewed,
    replication_rng,
)
from kmjack.simgen.generators import KOZIOL_GREEN_LIFETIME

from .config import AFT, KOZIOL_GREEN, StudyConfig, StudyKind

logger = logging.getLogger(__name__)

ORIGINAL_STREAM = 0
MODIFIED_STREAM = 1
RESAMPLING_STREAM = 2

# Replications handed to a worker at a time.
BATCH_SIZE = 250


class Estimator(Enum):
    S_HAT = "S_hat"
    S_TILDE = "S_tilde"
    S_HAT_STAR = "S_hat_star"
    S_TILDE_STAR = "S_tilde_star"

    @property
    def modified(self) -> bool:
        return self in (Estimator.S_HAT_STAR, Estimator.S_TILDE_STAR)

    @classmethod
    def from_name(cls, name: str) -> "Estimator":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"Unknown estimator '{name}'. Valid options: {[e.value for e in cls]}")


ESTIMATORS = tuple(Estimator)

# Per-replication record: the four estimates, then diagnostics.
_BIAS, _MODIFIED_BIAS, _CENSORED, _ATTEMPTS = range(4, 8)
_ROW = 8


@dataclass(frozen=True)
class RunSummary:
    """Bias and variance of one estimator over the replications of one cell."""

    estimator: Estimator
    n: int
    p_percent: int
    mean_bias: float
    variance: float
    replications: int
    valid_count: int
    mc_se: float = math.nan

    def __post_init__(self) -> None:
        if not 0 <= self.valid_count <= self.replications:
            raise ValueError(
                f"valid_count {self.valid_count} outside [0, {self.replications}]"
            )
        if self.valid_count and not self.variance >= 0:
            raise ValueError(f"variance must be nonnegative, got {self.variance!r}")


@dataclass(frozen=True)
class CellDiagnostics:
    """Per-cell facts about the simulated data rather than the estimators."""

    n: int
    p_percent: int
    censoring_parameter: float | None
    censoring_fraction: float
    mean_jackknife_bias: float
    mean_modified_bias: float
    mean_attempts: float


@dataclass(frozen=True, eq=False)
class StudyResult:
    """The complete estimator x n x p grid of summaries for one distribution."""

    study: StudyKind
    distribution: str
    config: StudyConfig
    true_mean: float
    summaries: tuple[RunSummary, ...]
    cells: tuple[CellDiagnostics, ...] = ()
    elapsed_s: float = 0.0

    def __post_init__(self) -> None:
        expected = {
            (e, n, p) for e in ESTIMATORS for n in self.config.n_list for p in self.config.p_list
        }
        present = {(s.estimator, s.n, s.p_percent) for s in self.summaries}
        if present != expected or len(self.summaries) != len(expected):
            raise ValueError(
                f"incomplete result grid: {len(present)} of {len(expected)} summaries"
            )

    def summary(self, estimator: Estimator, n: int, p_percent: int) -> RunSummary:
        for s in self.summaries:
            if (s.estimator, s.n, s.p_percent) == (estimator, n, p_percent):
                return s
        raise KeyError((estimator, n, p_percent))

    def cell(self, n: int, p_percent: int) -> CellDiagnostics:
        for c in self.cells:
            if (c.n, c.p_percent) == (n, p_percent):
                return c
        raise KeyError((n, p_percent))


def true_mean(target: DistSpec | AftDesign | str) -> float:
    """Analytic mean lifetime of a study distribution.

    Args:
        target: A lifetime :class:`DistSpec`, an :class:`AftDesign`, or a
            study distribution name (``"koziol_green"``, ``"aft"`` or a key
            of ``SKEWED_STUDY``).

    Raises:
        DomainError: For an unknown name or an unsupported target.
    """
    match target:
        case DistSpec() | AftDesign():
            return target.mean()
        case str() if target == KOZIOL_GREEN:
            return KOZIOL_GREEN_LIFETIME.mean()
        case str() if target == AFT:
            return AftDesign().mean()
        case str() if target in SKEWED_STUDY:
            return SKEWED_STUDY[target][0].mean()
    raise DomainError(f"no analytic mean for {target!r}")


Draw = Callable[[np.random.Generator, Constraint], GeneratedDataset]


def _draw_for(config: StudyConfig, distribution: str, n: int, p: float) -> Draw:
    match config.study:
        case StudyKind.KG:
            return lambda rng, c: gen_koziol_green(n, p, rng, c)
        case StudyKind.DIST:
            return lambda rng, c: gen_skewed(distribution, n, p, rng, c)
        case StudyKind.AFT:
            design = AftDesign(alpha=config.alpha)
            return lambda rng, c: gen_aft(n, p, rng, design, c)


def _censoring_parameter(config: StudyConfig, distribution: str, p: float) -> float | None:
    if p == 0:
        return None
    match config.study:
        case StudyKind.KG:
            return calibrate_censoring(KOZIOL_GREEN_LIFETIME, CensorFamily.EXPONENTIAL, p)
        case StudyKind.DIST:
            lifetime, family = SKEWED_STUDY[distribution]
            return calibrate_censoring(lifetime, family, p)
        case StudyKind.AFT:
            return calibrate_aft_censoring(AftDesign(alpha=config.alpha), p)


@dataclass(frozen=True)
class _CellRun:
    config: StudyConfig
    n: int
    p_percent: int
    draw: Draw

    def _rng(self, r: int, stream: int) -> np.random.Generator:
        return replication_rng(self.config.seed, (self.n, self.p_percent), r, stream)

    def _modified(self, ds: GeneratedDataset, r: int) -> EstimateBundle | None:
        imputer = build_imputer(
            self.config.imputation,
            covariates=ds.covariates,
            seed=self._rng(r, RESAMPLING_STREAM),
        )
        try:
            return estimate_by_case(
                ds.sample, identity, imputer, reclassify=self.config.reclassify_last_weight
            )
        except NumericalError as e:
            logger.debug("n=%d p=%d r=%d: modified estimator undefined: %s", self.n, self.p_percent, r, e)
            return None

    def replicate(self, r: int) -> np.ndarray:
        original_rule, modified_rule = self.config.sampling_constraints()
        ds = self.draw(self._rng(r, ORIGINAL_STREAM), original_rule)
        ds_modified = ds
        if modified_rule is not original_rule:
            ds_modified = self.draw(self._rng(r, MODIFIED_STREAM), modified_rule)

        original = corrected_estimate(ds.sample)
        modified = self._modified(ds_modified, r)

        row = np.full(_ROW, np.nan)
        row[[0, 1, _BIAS, _CENSORED, _ATTEMPTS]] = (
            original.s_hat,
            original.s_tilde,
            original.bias,
            ds.sample.censored_fraction,
            ds.attempts,
        )
        if modified is not None:
            row[[2, 3, _MODIFIED_BIAS]] = modified.s_hat, modified.s_tilde, modified.bias
        return row

    def replicate_batch(self, replications: range) -> np.ndarray:
        return np.vstack([self.replicate(r) for r in replications])


def _summarize(run: _CellRun, rows: np.ndarray, truth: float) -> list[RunSummary]:
    summaries = []
    replications = rows.shape[0]
    for k, estimator in enumerate(ESTIMATORS):
        values = rows[:, k]
        values = values[~np.isnan(values)]
        count = int(values.size)
        mean_bias = float(values.mean() - truth) if count else math.nan
        variance = float(values.var(ddof=1)) if count > 1 else 0.0
        mc_se = math.sqrt(variance / count) if count else math.nan
        summaries.append(
            RunSummary(
                estimator=estimator,
                n=run.n,
                p_percent=run.p_percent,
                mean_bias=mean_bias,
                variance=variance,
                replications=replications,
                valid_count=count,
                mc_se=mc_se,
            )
        )
    return summaries


def _nanmean(values: np.ndarray) -> float:
    values = values[~np.isnan(values)]
    return float(values.mean()) if values.size else math.nan


def _post(receiver: MessageReceiver | None, message) -> None:
    if receiver is not None:
        receiver.receive_message(message)


def run_study(
    config: StudyConfig,
    distribution: str | None = None,
    receiver: MessageReceiver | None = None,
    threads: int = 1,
) -> StudyResult:
    """Run every cell of ``config`` for one distribution.

    Args:
        config: The study configuration.
        distribution: One of ``config.distributions``; defaults to the first.
        receiver: Optional queue for progress messages.
        threads: Worker threads; the result is identical for any value.

    Returns:
        The complete summary grid with per-cell diagnostics.

    Raises:
        ConfigurationError: If ``distribution`` is not part of the config.
        CalibrationError: If a censoring level cannot be attained.
        InfeasibleConstraintError: If a sampling constraint cannot be met.
    """
    distribution = distribution or config.distributions[0]
    if distribution not in config.distributions:
        raise ConfigurationError(f"'{distribution}' is not among {list(config.distributions)}")
    if threads < 1:
        raise ConfigurationError(f"threads must be >= 1, got {threads}")

    if config.study is StudyKind.AFT:
        truth = true_mean(AftDesign(alpha=config.alpha))
    else:
        truth = true_mean(distribution)
    cells = config.cells
    R = config.replications
    started = time.perf_counter()
    logger.info(
        "%s study, %s: %d cells x %d replications on %d thread(s)",
        config.study.value, distribution, len(cells), R, threads,
    )
    _post(
        receiver,
        StudyStartedMessage.create(
            study=config.study.value,
            distribution=distribution,
            cell_count=len(cells),
            replications=R,
            threads=threads,
        ),
    )

    summaries: list[RunSummary] = []
    diagnostics: list[CellDiagnostics] = []
    batches = [range(i, min(i + BATCH_SIZE, R)) for i in range(0, R, BATCH_SIZE)]
    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for index, (n, p_percent) in enumerate(cells):
            cell_started = time.perf_counter()
            p = p_percent / 100
            parameter = _censoring_parameter(config, distribution, p)
            _post(
                receiver,
                CellStartedMessage.create(
                    cell_index=index, n=n, p_percent=p_percent, censoring_parameter=parameter
                ),
            )
            run = _CellRun(config, n, p_percent, _draw_for(config, distribution, n, p))
            if executor is None:
                rows = run.replicate_batch(range(R))
            else:
                futures = [executor.submit(run.replicate_batch, batch) for batch in batches]
                # reduce in replication order
                rows = np.vstack([future.result() for future in futures])

            cell_summaries = _summarize(run, rows, truth)
            summaries.extend(cell_summaries)
            diagnostics.append(
                CellDiagnostics(
                    n=n,
                    p_percent=p_percent,
                    censoring_parameter=parameter,
                    censoring_fraction=float(rows[:, _CENSORED].mean()),
                    mean_jackknife_bias=float(rows[:, _BIAS].mean()),
                    mean_modified_bias=_nanmean(rows[:, _MODIFIED_BIAS]),
                    mean_attempts=float(rows[:, _ATTEMPTS].mean()),
                )
            )
            elapsed = time.perf_counter() - cell_started
            logger.info("cell n=%d p=%d%% done in %.2fs", n, p_percent, elapsed)
            _post(
                receiver,
                CellFinishedMessage.create(
                    cell_index=index,
                    n=n,
                    p_percent=p_percent,
                    censoring_fraction=diagnostics[-1].censoring_fraction,
                    elapsed_s=elapsed,
                    mean_bias={s.estimator.value: s.mean_bias for s in cell_summaries},
                ),
            )
    finally:
        if executor is not None:
            executor.shutdown(wait=True, cancel_futures=True)

    elapsed = time.perf_counter() - started
    _post(
        receiver,
        StudyFinishedMessage.create(distribution=distribution, cell_count=len(cells), elapsed_s=elapsed),
    )
    return StudyResult(
        study=config.study,
        distribution=distribution,
        config=config,
        true_mean=truth,
        summaries=tuple(summaries),
        cells=tuple(diagnostics),
        elapsed_s=elapsed,
    )


def run_studies(
    config: StudyConfig, receiver: MessageReceiver | None = None, threads: int = 1
) -> list[StudyResult]:
    """Run :func:`run_study` for every distribution of ``config``."""
    return [run_study(config, d, receiver=receiver, threads=threads) for d in config.distributions]
