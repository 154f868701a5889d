import numpy as np
import pytest

from kmjack.errors import ConfigurationError, InfeasibleConstraintError, SampleSizeError
from kmjack.simgen import (
    SKEWED_STUDY,
    AftDesign,
    Constraint,
    gen_aft,
    gen_koziol_green,
    gen_skewed,
    replication_rng,
    resolve_skewed,
)
from kmjack.simgen import generators


def test_koziol_green_is_deterministic_by_seed() -> None:
    a = gen_koziol_green(50, 0.5, seed=11)
    b = gen_koziol_green(50, 0.5, seed=11)
    c = gen_koziol_green(50, 0.5, seed=12)
    assert a.sample.matches(b.sample)
    assert not a.sample.matches(c.sample)
    assert a.true_mean == 1.0
    assert a.target_censoring == 0.5
    assert a.attempts == 1


def test_koziol_green_censoring_rate(rng) -> None:
    fractions = [gen_koziol_green(100, 0.7, seed=rng).sample.censored_fraction for _ in range(400)]
    assert np.mean(fractions) == pytest.approx(0.7, abs=0.01)


def test_no_censoring_at_level_zero() -> None:
    data = gen_skewed("gamma", 40, 0.0, seed=3)
    assert data.sample.statuses.all()
    assert data.sample.censored_fraction == 0.0


@pytest.mark.parametrize("name", list(SKEWED_STUDY))
def test_constraint_is_met(name) -> None:
    data = gen_skewed(name, 30, 0.5, seed=5, constraint=Constraint.SECOND_LAST_CENSORED_AND_LAST_UNCENSORED)
    assert data.sample.case == (0, 1)
    assert data.second_last_censored and data.last_uncensored
    assert data.true_mean == pytest.approx(SKEWED_STUDY[name][0].mean())


def test_second_last_censored_constraint() -> None:
    data = gen_koziol_green(30, 0.3, seed=9, constraint=Constraint.SECOND_LAST_CENSORED)
    assert data.second_last_censored
    assert data.constraint is Constraint.SECOND_LAST_CENSORED


def test_infeasible_constraint(monkeypatch) -> None:
    monkeypatch.setattr(generators, "MAX_ATTEMPTS", 5)
    with pytest.raises(InfeasibleConstraintError):
        gen_koziol_green(20, 0.0, seed=1, constraint=Constraint.SECOND_LAST_CENSORED)


def test_invalid_arguments() -> None:
    with pytest.raises(SampleSizeError):
        gen_koziol_green(1, 0.5)
    with pytest.raises(ConfigurationError):
        gen_koziol_green(10, 1.0)
    with pytest.raises(ConfigurationError):
        gen_skewed("pareto", 10, 0.5)


def test_resolve_skewed() -> None:
    assert resolve_skewed("LogNormal") == SKEWED_STUDY["lognormal"]
    pair = SKEWED_STUDY["gamma"]
    assert resolve_skewed(pair) is pair


def test_aft_covariates_are_aligned_with_sample() -> None:
    design = AftDesign(alpha=0.3, beta=(1.0, 2.0), sigma=1e-9)
    data = gen_aft(40, 0.0, seed=2, design=design)
    assert data.covariates.shape == (40, 2)
    predicted = design.alpha + data.covariates @ np.asarray(design.beta)
    assert np.allclose(np.log(data.sample.times), predicted, atol=1e-6)
    assert data.true_mean == pytest.approx(design.mean())


def test_aft_censoring_rate(rng) -> None:
    fractions = [gen_aft(100, 0.3, seed=rng).sample.censored_fraction for _ in range(200)]
    assert np.mean(fractions) == pytest.approx(0.3, abs=0.015)


def test_aft_is_deterministic_by_seed() -> None:
    a = gen_aft(30, 0.5, seed=4)
    b = gen_aft(30, 0.5, seed=4)
    assert a.sample.matches(b.sample)
    assert np.array_equal(a.covariates, b.covariates)


def test_replication_streams() -> None:
    first = replication_rng(7, (30, 50), 3).random(4)
    assert np.array_equal(first, replication_rng(7, (30, 50), 3).random(4))
    assert not np.array_equal(first, replication_rng(7, (30, 50), 3, stream=1).random(4))
    assert not np.array_equal(first, replication_rng(7, (30, 50), 4).random(4))
    assert not np.array_equal(first, replication_rng(8, (30, 50), 3).random(4))
    assert np.array_equal(replication_rng(1, 5, 0).random(2), replication_rng(1, (5,), 0).random(2))
