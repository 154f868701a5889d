"""Small study configurations shared by the experiment tests."""

from kmjack.experiments import StudyConfig, StudyKind


def kg_config(**overrides) -> StudyConfig:
    """A Koziol-Green study small enough to run in a unit test."""
    fields = dict(study=StudyKind.KG, n_list=(20, 40), p_list=(30, 60), replications=60, seed=99)
    fields.update(overrides)
    return StudyConfig(**fields)
