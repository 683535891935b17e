import pytest

from kinematics.search_config import SearchConfig


@pytest.fixture
def cfg() -> SearchConfig:
    return SearchConfig()


@pytest.fixture
def prediction_cfg() -> SearchConfig:
    """Settings of the scenario runs: 20 s prediction horizon"""
    return SearchConfig(horizon=20.0)
