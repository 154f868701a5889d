import json
import queue

import numpy as np
import pytest

from kmjack.errors import ConfigurationError, DomainError
from kmjack.experiments import (
    ESTIMATORS,
    Estimator,
    StudyConfig,
    StudyKind,
    StudyResult,
    run_studies,
    run_study,
    true_mean,
)
from kmjack.imputation import ImputationMethod
from kmjack.messaging import (
    CellFinishedMessage,
    CellStartedMessage,
    MessageReceiver,
    MessageType,
    StudyFinishedMessage,
    StudyStartedMessage,
)
from kmjack.simgen import AftDesign, DistSpec, gen_koziol_green, replication_rng
from tests.experiments import kg_config


def test_uncensored_single_replication() -> None:
    config = kg_config(n_list=(10,), p_list=(0,), replications=1, seed=5)
    result = run_study(config)
    summaries = [result.summary(e, 10, 0) for e in ESTIMATORS]

    data = gen_koziol_green(10, 0.0, replication_rng(5, (10, 0), 0))
    expected = data.sample.times.mean() - 1.0
    for s in summaries:
        assert s.mean_bias == pytest.approx(expected, abs=1e-12)
        assert s.variance == 0.0
        assert s.valid_count == s.replications == 1
    assert result.cell(10, 0).censoring_parameter is None
    assert result.cell(10, 0).censoring_fraction == 0.0


def test_corrected_bias_is_estimate_bias_minus_jackknife_bias() -> None:
    result = run_study(kg_config())
    for n in (20, 40):
        for p in (30, 60):
            s_hat = result.summary(Estimator.S_HAT, n, p).mean_bias
            s_tilde = result.summary(Estimator.S_TILDE, n, p).mean_bias
            jackknife = result.cell(n, p).mean_jackknife_bias
            assert s_tilde == pytest.approx(s_hat - jackknife, abs=1e-12)
            assert jackknife <= 0


def test_results_do_not_depend_on_thread_count() -> None:
    config = kg_config(n_list=(25,), p_list=(50,), replications=300)
    single = run_study(config, threads=1)
    pooled = run_study(config, threads=3)
    assert single.summaries == pooled.summaries
    assert single.cells == pooled.cells


def test_cells_are_independent_of_grid_composition() -> None:
    small = run_study(kg_config(n_list=(20,), p_list=(60,)))
    large = run_study(kg_config())
    for e in ESTIMATORS:
        assert small.summary(e, 20, 60) == large.summary(e, 20, 60)


def test_seed_changes_results() -> None:
    a = run_study(kg_config(n_list=(20,), p_list=(60,), seed=1))
    b = run_study(kg_config(n_list=(20,), p_list=(60,), seed=2))
    assert a.summary(Estimator.S_HAT, 20, 60) != b.summary(Estimator.S_HAT, 20, 60)


@pytest.mark.slow
def test_koziol_green_study_levels_and_identities() -> None:
    config = kg_config(n_list=(30, 150), p_list=(0, 50, 90), replications=4000, seed=20130917)
    result = run_study(config, threads=2)
    for n in (30, 150):
        baseline = result.summary(Estimator.S_HAT, n, 0)
        assert abs(baseline.mean_bias) <= 3 * baseline.mc_se
        assert len({result.summary(e, n, 0).mean_bias for e in ESTIMATORS}) == 1
        for p in (50, 90):
            cell = result.cell(n, p)
            s_hat = result.summary(Estimator.S_HAT, n, p).mean_bias
            s_tilde = result.summary(Estimator.S_TILDE, n, p).mean_bias
            assert cell.censoring_fraction == pytest.approx(p / 100, abs=0.01)
            assert s_hat < 0
            assert s_tilde == pytest.approx(s_hat - cell.mean_jackknife_bias, abs=1e-12)


def test_skewed_study_draws_constrained_samples() -> None:
    config = StudyConfig(
        study=StudyKind.DIST,
        distributions=("gamma", "weibull"),
        n_list=(20,),
        p_list=(40,),
        replications=40,
    )
    results = run_studies(config)
    assert [r.distribution for r in results] == ["gamma", "weibull"]
    for result in results:
        cell = result.cell(20, 40)
        # every original sample ends in (censored, event)
        assert cell.mean_jackknife_bias < 0
        assert cell.mean_attempts >= 1
        s_hat = result.summary(Estimator.S_HAT, 20, 40)
        assert s_hat.valid_count == 40
        assert result.true_mean == pytest.approx(true_mean(result.distribution))


def test_aft_study_runs_with_covariate_imputation() -> None:
    config = StudyConfig(
        study=StudyKind.AFT,
        n_list=(40,),
        p_list=(30,),
        replications=20,
        imputation="w_tau_m",
    )
    result = run_study(config)
    assert result.true_mean == pytest.approx(AftDesign().mean())
    assert result.summary(Estimator.S_HAT, 40, 30).valid_count == 20
    modified = result.summary(Estimator.S_HAT_STAR, 40, 30)
    assert modified.valid_count >= 1
    assert np.isfinite(modified.mean_bias)
    assert result.cell(40, 30).censoring_fraction == pytest.approx(0.3, abs=0.15)


def test_aft_resampled_imputation_keeps_bias_finite() -> None:
    config = StudyConfig(
        study=StudyKind.AFT,
        n_list=(50,),
        p_list=(10, 40, 70),
        replications=30,
        seed=3,
        imputation=ImputationMethod("w_tau_star_m", resample_count=30),
    )
    result = run_study(config)
    for p in (10, 40, 70):
        for estimator in ESTIMATORS:
            summary = result.summary(estimator, 50, p)
            assert summary.valid_count >= 1
            assert np.isfinite(summary.mean_bias)
            assert np.isfinite(summary.mc_se)


def test_run_study_argument_checks() -> None:
    with pytest.raises(ConfigurationError):
        run_study(kg_config(), distribution="gamma")
    with pytest.raises(ConfigurationError):
        run_study(kg_config(), threads=0)


def test_true_mean() -> None:
    assert true_mean("koziol_green") == 1.0
    assert true_mean("gamma") == pytest.approx(4.0)
    assert true_mean(DistSpec.exponential(0.5)) == pytest.approx(2.0)
    assert true_mean("aft") == pytest.approx(AftDesign().mean())
    with pytest.raises(DomainError):
        true_mean("pareto")


def test_result_grid_must_be_complete() -> None:
    result = run_study(kg_config(replications=5))
    with pytest.raises(ValueError):
        StudyResult(
            study=result.study,
            distribution=result.distribution,
            config=result.config,
            true_mean=result.true_mean,
            summaries=result.summaries[:-1],
        )


def test_progress_messages() -> None:
    receiver = MessageReceiver()
    run_study(kg_config(replications=5), receiver=receiver)
    assert receiver.qsize() == 10
    messages = [receiver.get_message_nowait(), *receiver.drain()]
    assert receiver.empty()
    with pytest.raises(queue.Empty):
        receiver.get_message_nowait()

    assert isinstance(messages[0], StudyStartedMessage)
    assert messages[0].cell_count == 4
    assert isinstance(messages[-1], StudyFinishedMessage)
    middle = messages[1:-1]
    assert len(middle) == 8
    for index, (started, finished) in enumerate(zip(middle[::2], middle[1::2])):
        assert isinstance(started, CellStartedMessage)
        assert isinstance(finished, CellFinishedMessage)
        assert started.cell_index == finished.cell_index == index
        assert set(finished.mean_bias) == {e.value for e in Estimator}

    payload = json.loads(messages[0].to_json())
    assert payload["message_type"] == MessageType.STUDY_STARTED.value
    assert payload["study"] == "kg"
    assert len({m.message_id for m in messages}) == len(messages)
