import pytest

from cli.study_service import StudyService
from kmjack.errors import InfeasibleConstraintError
from kmjack.experiments import StudyConfig, StudyKind
from kmjack.messaging import CellFinishedMessage, StudyFinishedMessage, StudyStartedMessage
from kmjack.simgen import generators


def test_service_relays_messages_and_keeps_results() -> None:
    config = StudyConfig(
        study=StudyKind.DIST,
        distributions=("gamma", "lognormal"),
        n_list=(15,),
        p_list=(40,),
        replications=10,
    )
    service = StudyService(config, threads=2)
    messages = list(service.run())

    assert [r.distribution for r in service.results] == ["gamma", "lognormal"]
    assert sum(isinstance(m, StudyStartedMessage) for m in messages) == 2
    assert sum(isinstance(m, CellFinishedMessage) for m in messages) == 2
    assert isinstance(messages[-1], StudyFinishedMessage)


def test_service_reraises_study_errors(monkeypatch) -> None:
    monkeypatch.setattr(generators, "MAX_ATTEMPTS", 3)
    # no censoring can never give a censored second-largest datum
    config = StudyConfig(study=StudyKind.DIST, distributions=("gamma",), n_list=(10,), p_list=(0,), replications=2)
    service = StudyService(config)
    with pytest.raises(InfeasibleConstraintError):
        list(service.run())
    assert service.results == []
