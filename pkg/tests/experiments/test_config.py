import pytest

from kmjack.errors import ConfigurationError
from kmjack.experiments import CONFIG_ECHO, StudyConfig, StudyKind, config_from_dict, dump_config, load_config
from kmjack.imputation import ImputationVariant
from kmjack.simgen import SKEWED_STUDY, Constraint
from paths import get_path


@pytest.mark.parametrize("kind", list(StudyKind))
def test_shipped_configs_load(kind) -> None:
    config = load_config(get_path("configs", f"{kind.value}_study.toml"))
    assert config.study is kind
    assert config.replications == 10_000
    assert config.source.endswith(f"{kind.value}_study.toml")


def test_kg_config_grid() -> None:
    config = load_config(get_path("configs", "kg_study.toml"))
    assert config.n_list == (30, 50, 100, 150)
    assert config.p_list == tuple(range(10, 100, 10))
    assert len(config.cells) == 36
    assert config.cells[:2] == [(30, 10), (30, 20)]
    assert config.imputation.variant is ImputationVariant.PREDICTED_DIFFERENCE
    assert config.constraint is Constraint.NONE


def test_aft_config_uses_resampled_imputation() -> None:
    config = load_config(get_path("configs", "aft_study.toml"))
    assert config.imputation.variant is ImputationVariant.RESAMPLED_MEAN
    assert config.imputation.resample_count == 100
    assert config.p_list == tuple(range(10, 80, 10))


def test_json5_config(tmp_path) -> None:
    path = tmp_path / "study.json5"
    path.write_text(
        """
        // trimmed dist study
        {
          study: "dist-study",
          distributions: ["Gamma", "weibull"],
          n_list: [20, 40],
          p_list: [30],
          replications: 50,
          imputation: "efron",
        }
        """
    )
    config = load_config(path)
    assert config.study is StudyKind.DIST
    assert config.distributions == ("gamma", "weibull")
    assert config.imputation.variant is ImputationVariant.EFRON


def test_defaults_fill_missing_grid() -> None:
    config = StudyConfig(study="dist")
    assert config.distributions == tuple(SKEWED_STUDY)
    assert len(config.cells) == 36
    assert config.imputation.variant is ImputationVariant.PREDICTED_DIFFERENCE
    aft = StudyConfig(study=StudyKind.AFT)
    assert aft.n_list == (30, 50, 100)
    assert aft.imputation.variant is ImputationVariant.RESAMPLED_MEAN


@pytest.mark.parametrize(
    "data",
    [
        {"study": "kg", "replicates": 10},
        {"study": "kg", "imputation": {"method": "w_tau_m"}},
        {"study": "kg", "imputation": {"method": "w_nu", "gap": 0.5}},
        {"study": "kg", "p_list": [50, 100]},
        {"study": "kg", "n_list": [1, 30]},
        {"study": "kg", "n_list": [30, 30]},
        {"study": "kg", "replications": 0},
        {"study": "kg", "constraint": "last_censored"},
        {"study": "dist", "distributions": ["pareto"]},
        {"study": "kg", "distributions": ["gamma"]},
        {"study": "survival"},
        {"replications": 10},
        {"study": "kg", "n_list": "thirty"},
    ],
)
def test_invalid_configs(data) -> None:
    with pytest.raises(ConfigurationError):
        config_from_dict(data)


def test_unsupported_or_missing_files(tmp_path) -> None:
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "missing.toml")
    path = tmp_path / "study.yaml"
    path.write_text("study: kg\n")
    with pytest.raises(ConfigurationError):
        load_config(path)
    broken = tmp_path / "broken.toml"
    broken.write_text("study = \n")
    with pytest.raises(ConfigurationError):
        load_config(broken)


def test_sampling_constraints() -> None:
    assert StudyConfig(study="dist").sampling_constraints() == (
        Constraint.SECOND_LAST_CENSORED_AND_LAST_UNCENSORED,
        Constraint.SECOND_LAST_CENSORED,
    )
    unconstrained = StudyConfig(study="dist", constraint="none")
    assert unconstrained.sampling_constraints() == (Constraint.NONE, Constraint.NONE)
    assert StudyConfig(study="kg").sampling_constraints() == (Constraint.NONE, Constraint.NONE)


def test_with_overrides_skips_none() -> None:
    config = StudyConfig(study="kg", seed=1, replications=100)
    changed = config.with_overrides(seed=2, replications=None)
    assert changed.seed == 2
    assert changed.replications == 100
    assert config.with_overrides(seed=None) is config
    with pytest.raises(ConfigurationError):
        config.with_overrides(replications=10**9)


def test_config_echo_reloads_to_same_config(tmp_path) -> None:
    config = load_config(get_path("configs", "aft_study.toml"))
    path = dump_config(config, tmp_path / "out")
    assert path.name == CONFIG_ECHO
    assert load_config(path) == config
