from typer.testing import CliRunner

from cli.app import EXIT_USAGE, app
from kmjack import __version__
from tests.cli import write_dataset, write_kg_config

runner = CliRunner()


def test_version() -> None:
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0
    assert f"kmjack v{__version__}" in result.output


def test_estimate_with_censored_second_largest(tmp_path) -> None:
    path = write_dataset(tmp_path, [(1, 0), (2, 1)])
    result = runner.invoke(app, ["estimate", str(path)])
    assert result.exit_code == 0, result.output
    assert "2.000000" in result.output
    assert "-1.000000" in result.output
    assert "3.000000" in result.output


def test_estimate_notes_missing_imputation(tmp_path) -> None:
    path = write_dataset(tmp_path, [(1, 1), (2, 0)])
    result = runner.invoke(app, ["estimate", str(path)])
    assert result.exit_code == 0
    assert "pass --impute" in result.output


def test_estimate_with_imputation(tmp_path) -> None:
    path = write_dataset(tmp_path, [(1, 1), (2, 1), (3, 0), (4, 0)])
    result = runner.invoke(app, ["estimate", str(path), "--impute", "w_nu"])
    assert result.exit_code == 0, result.output
    assert "5.750000" in result.output
    assert "predicted_difference" in result.output


def test_estimate_rejects_malformed_dataset(tmp_path) -> None:
    path = tmp_path / "bad.csv"
    path.write_text("1,1\n2,1\nabc,0\n")
    result = runner.invoke(app, ["estimate", str(path)])
    assert result.exit_code == EXIT_USAGE
    assert "line 3" in result.output


def test_estimate_rejects_single_observation(tmp_path) -> None:
    path = write_dataset(tmp_path, [(1, 1)])
    result = runner.invoke(app, ["estimate", str(path)])
    assert result.exit_code == EXIT_USAGE


def test_estimate_rejects_unknown_method(tmp_path) -> None:
    path = write_dataset(tmp_path, [(1, 1), (2, 1), (3, 0)])
    result = runner.invoke(app, ["estimate", str(path), "--impute", "nope"])
    assert result.exit_code == EXIT_USAGE


def test_impute(tmp_path) -> None:
    path = write_dataset(tmp_path, [(1, 1), (2, 1), (3, 0), (4, 0)])
    result = runner.invoke(app, ["impute", str(path)])
    assert result.exit_code == 0
    assert result.output.strip() == "5"
    efron = runner.invoke(app, ["impute", str(path), "-m", "efron"])
    assert efron.output.strip() == "4"


def test_impute_needs_censored_largest(tmp_path) -> None:
    path = write_dataset(tmp_path, [(1, 1), (2, 1)])
    result = runner.invoke(app, ["impute", str(path)])
    assert result.exit_code == EXIT_USAGE


def test_calibrate() -> None:
    assert runner.invoke(app, ["calibrate", "koziol_green", "0.5"]).output.strip() == "1"
    assert runner.invoke(app, ["calibrate", "exponential", "0.5"]).output.strip() == "0.2"
    gamma = runner.invoke(app, ["calibrate", "gamma", "0.4", "--censoring", "exponential"])
    assert gamma.exit_code == 0
    assert float(gamma.output) > 0


def test_calibrate_rejects_bad_input() -> None:
    assert runner.invoke(app, ["calibrate", "koziol_green", "1.5"]).exit_code == EXIT_USAGE
    assert runner.invoke(app, ["calibrate", "pareto", "0.5"]).exit_code == EXIT_USAGE
    bad_family = runner.invoke(app, ["calibrate", "gamma", "0.5", "--censoring", "weibull"])
    assert bad_family.exit_code == EXIT_USAGE


def test_kg_study_writes_tables(tmp_path) -> None:
    config = write_kg_config(tmp_path)
    out = tmp_path / "out"
    result = runner.invoke(app, ["kg-study", "--config", str(config), "--out", str(out)])
    assert result.exit_code == 0, result.output
    header = (out / "bias.csv").read_text().splitlines()[0]
    assert header == "p_percent,n,estimator,value,replications,valid_count"
    assert (out / "config.used.json").exists()


def test_kg_study_output_does_not_depend_on_threads(tmp_path) -> None:
    config = write_kg_config(tmp_path)
    for threads in ("1", "2"):
        args = ["kg-study", "-c", str(config), "-o", str(tmp_path / threads), "-t", threads]
        assert runner.invoke(app, args).exit_code == 0
    for name in ("bias.csv", "variance.csv", "curves.csv"):
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "2" / name).read_bytes()


def test_seed_and_replication_overrides(tmp_path) -> None:
    config = write_kg_config(tmp_path)
    out = tmp_path / "out"
    args = ["kg-study", "-c", str(config), "-o", str(out), "-s", "11", "-r", "25"]
    assert runner.invoke(app, args).exit_code == 0
    echo = (out / "config.used.json").read_text()
    assert '"seed": 11' in echo
    assert '"replications": 25' in echo


def test_study_rejects_config_of_another_study(tmp_path) -> None:
    config = write_kg_config(tmp_path)
    result = runner.invoke(app, ["aft-study", "--config", str(config), "--out", str(tmp_path / "o")])
    assert result.exit_code == EXIT_USAGE
