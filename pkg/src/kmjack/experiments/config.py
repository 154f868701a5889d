"""Study configuration: loading, validation and the echo written next to results."""

import json
import logging
import tomllib
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any

from kmjack.errors import ConfigurationError
from kmjack.imputation import ImputationMethod, ImputationVariant
from kmjack.settings import DEFAULT_REPLICATIONS, DEFAULT_SEED, MAX_REPLICATIONS
from kmjack.simgen import SKEWED_STUDY, Constraint
from kmjack.utils.param_parser import ParameterParser

logger = logging.getLogger(__name__)

CONFIG_ECHO = "config.used.json"

KOZIOL_GREEN = "koziol_green"
AFT = "aft"

_KEYS = {
    "study",
    "distributions",
    "n_list",
    "p_list",
    "replications",
    "seed",
    "constraint",
    "imputation",
    "alpha",
    "reclassify_last_weight",
}
_IMPUTATION_KEYS = {"method", "resample_count", "gap_fraction", "seed"}


class StudyKind(Enum):
    KG = "kg"
    DIST = "dist"
    AFT = "aft"

    @classmethod
    def from_name(cls, name: str) -> "StudyKind":
        key = name.strip().lower().replace("-study", "").replace("_study", "")
        try:
            return cls(key)
        except ValueError:
            raise ConfigurationError(
                f"Unknown study '{name}'. Valid options: {[k.value for k in cls]}"
            )


_PERCENT_GRID = tuple(range(10, 100, 10))

_DEFAULTS: dict[StudyKind, dict[str, Any]] = {
    StudyKind.KG: {
        "distributions": (KOZIOL_GREEN,),
        "n_list": (30, 50, 100, 150),
        "p_list": _PERCENT_GRID,
        "variant": ImputationVariant.PREDICTED_DIFFERENCE,
    },
    StudyKind.DIST: {
        "distributions": tuple(SKEWED_STUDY),
        "n_list": (30, 50, 100, 150),
        "p_list": _PERCENT_GRID,
        "variant": ImputationVariant.PREDICTED_DIFFERENCE,
    },
    StudyKind.AFT: {
        "distributions": (AFT,),
        "n_list": (30, 50, 100),
        "p_list": tuple(range(10, 80, 10)),
        "variant": ImputationVariant.RESAMPLED_MEAN,
    },
}


@dataclass(frozen=True)
class StudyConfig:
    """A fully resolved study: grid, replication count, seed and estimator options.

    ``p_list`` holds censoring levels in percent. ``constraint`` of ``None``
    selects the study's own sampling rule (see :meth:`sampling_constraints`).
    """

    study: StudyKind
    distributions: tuple[str, ...] = ()
    n_list: tuple[int, ...] = ()
    p_list: tuple[int, ...] = ()
    replications: int = DEFAULT_REPLICATIONS
    seed: int = DEFAULT_SEED
    constraint: Constraint | None = None
    imputation: ImputationMethod | str | None = None
    alpha: float = 0.0
    reclassify_last_weight: bool = True
    source: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if isinstance(self.study, str):
            object.__setattr__(self, "study", StudyKind.from_name(self.study))
        defaults = _DEFAULTS[self.study]
        for name in ("distributions", "n_list", "p_list"):
            value = tuple(getattr(self, name)) or defaults[name]
            object.__setattr__(self, name, value)
        if self.imputation is None:
            object.__setattr__(self, "imputation", ImputationMethod(defaults["variant"]))
        elif isinstance(self.imputation, str):
            object.__setattr__(self, "imputation", ImputationMethod(self.imputation))
        if isinstance(self.constraint, str):
            object.__setattr__(self, "constraint", _constraint(self.constraint))
        self._validate()

    def _validate(self) -> None:
        if not 1 <= self.replications <= MAX_REPLICATIONS:
            raise ConfigurationError(
                f"replications must lie in [1, {MAX_REPLICATIONS}], got {self.replications}"
            )
        if any(n < 2 for n in self.n_list):
            raise ConfigurationError(f"every n must be >= 2, got {list(self.n_list)}")
        if any(not 0 <= p < 100 for p in self.p_list):
            raise ConfigurationError(f"censoring percentages must lie in [0, 100), got {list(self.p_list)}")
        if len(set(self.n_list)) != len(self.n_list) or len(set(self.p_list)) != len(self.p_list):
            raise ConfigurationError("n_list and p_list must not repeat values")

        match self.study:
            case StudyKind.KG:
                allowed = {KOZIOL_GREEN}
            case StudyKind.DIST:
                allowed = set(SKEWED_STUDY)
            case StudyKind.AFT:
                allowed = {AFT}
        unknown = [d for d in self.distributions if d not in allowed]
        if unknown:
            raise ConfigurationError(
                f"{self.study.value} study does not know distributions {unknown}. "
                f"Valid options: {sorted(allowed)}"
            )
        if self.imputation.variant.requires_covariates and self.study is not StudyKind.AFT:
            raise ConfigurationError(
                f"imputation method '{self.imputation.tag}' requires covariates, "
                f"which the {self.study.value} study does not generate"
            )

    def sampling_constraints(self) -> tuple[Constraint, Constraint]:
        """Constraints for the datasets feeding the original and the modified estimators.

        The skewed-distribution study, unless told otherwise, draws the
        originals subject to ``d(n-1) = 0, d(n) = 1`` and the modified
        estimators subject to ``d(n-1) = 0``. Other studies draw unconditionally.
        """
        if self.constraint is not None:
            return self.constraint, self.constraint
        if self.study is StudyKind.DIST:
            return (
                Constraint.SECOND_LAST_CENSORED_AND_LAST_UNCENSORED,
                Constraint.SECOND_LAST_CENSORED,
            )
        return Constraint.NONE, Constraint.NONE

    @property
    def cells(self) -> list[tuple[int, int]]:
        """Grid cells ``(n, p_percent)``, n-major."""
        return [(n, p) for n in self.n_list for p in self.p_list]

    def with_overrides(self, **overrides: Any) -> "StudyConfig":
        """Copy with the non-``None`` overrides applied (command-line flags)."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **changes) if changes else self

    def to_dict(self) -> dict[str, Any]:
        method = self.imputation
        return {
            "study": self.study.value,
            "distributions": list(self.distributions),
            "n_list": list(self.n_list),
            "p_list": list(self.p_list),
            "replications": self.replications,
            "seed": self.seed,
            "constraint": None if self.constraint is None else self.constraint.value,
            "imputation": {
                "method": method.tag,
                "resample_count": method.resample_count,
                "gap_fraction": method.gap_fraction,
                "seed": method.seed,
            },
            "alpha": self.alpha,
            "reclassify_last_weight": self.reclassify_last_weight,
        }


def _constraint(name: str) -> Constraint:
    try:
        return Constraint(name.strip().lower())
    except ValueError:
        raise ConfigurationError(
            f"Unknown constraint '{name}'. Valid options: {[c.value for c in Constraint]}"
        )


def _imputation(table: Any) -> ImputationMethod | None:
    if table is None:
        return None
    if isinstance(table, str):
        return ImputationMethod(table)
    if not isinstance(table, dict):
        raise ConfigurationError(f"imputation must be a table or a method name, got {table!r}")
    unknown = set(table) - _IMPUTATION_KEYS
    if unknown:
        raise ConfigurationError(f"Unknown imputation keys {sorted(unknown)}")
    method = ParameterParser.get_required_param(table, "method")
    return ImputationMethod(
        variant=method,
        resample_count=int(table.get("resample_count", 100)),
        gap_fraction=float(table.get("gap_fraction", 0.25)),
        seed=table.get("seed"),
    )


def config_from_dict(data: dict[str, Any], source: str | None = None) -> StudyConfig:
    """Build a :class:`StudyConfig` from parsed TOML/JSON content.

    Raises:
        ConfigurationError: On unknown keys or invalid values.
    """
    unknown = set(data) - _KEYS
    if unknown:
        raise ConfigurationError(f"Unknown configuration keys {sorted(unknown)}")
    study = StudyKind.from_name(str(ParameterParser.get_required_param(data, "study")))
    distributions = data.get("distributions", ())
    if isinstance(distributions, str):
        distributions = (distributions,)
    try:
        return StudyConfig(
            study=study,
            distributions=tuple(str(d).lower() for d in distributions),
            n_list=tuple(ParameterParser.get_int_list(data, "n_list", [])),
            p_list=tuple(ParameterParser.get_int_list(data, "p_list", [])),
            replications=int(data.get("replications", DEFAULT_REPLICATIONS)),
            seed=int(data.get("seed", DEFAULT_SEED)),
            constraint=data.get("constraint"),
            imputation=_imputation(data.get("imputation")),
            alpha=float(data.get("alpha", 0.0)),
            reclassify_last_weight=bool(data.get("reclassify_last_weight", True)),
            source=source,
        )
    except ConfigurationError:
        raise
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"Invalid configuration value: {e}")


def load_config(path: str | Path) -> StudyConfig:
    """Load a study configuration from TOML, JSON or JSON5.

    Raises:
        ConfigurationError: If the file is missing, unparsable or invalid.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path}: {e}")

    if path.suffix.lower() == ".toml":
        try:
            data = tomllib.loads(text)
        except tomllib.TOMLDecodeError as e:
            raise ConfigurationError(f"{path}: {e}")
    elif path.suffix.lower() in (".json", ".json5"):
        data = ParameterParser.parse_params(text)
    else:
        raise ConfigurationError(f"unsupported config format '{path.suffix}' (use .toml, .json or .json5)")

    logger.debug("loaded config %s: %s", path, data)
    return config_from_dict(data, source=str(path))


def dump_config(config: StudyConfig, directory: str | Path) -> Path:
    """Write the configuration echo ``config.used.json`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / CONFIG_ECHO
    path.write_text(json.dumps(config.to_dict(), indent=2) + "\n", encoding="utf-8")
    return path
