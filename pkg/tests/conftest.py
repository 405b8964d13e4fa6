import pytest

from aisoc.pipeline import ExperimentConfig, run_experiment


@pytest.fixture(scope="session")
def demo_config() -> ExperimentConfig:
    return ExperimentConfig(seed=7)


@pytest.fixture(scope="session")
def demo_result(demo_config):
    return run_experiment(demo_config)


@pytest.fixture(scope="session")
def demo_scorer(demo_result):
    return demo_result.scorer
