"""
Shared fixtures for the lab test suites
"""
import numpy as np
import pytest

from src.models.params import Params


@pytest.fixture
def params():
    return Params(5.0, 3.0)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Keep KAKUTANI_* and LOG_LEVEL from the caller's shell out of the tests"""
    for key in ('KAKUTANI_M', 'KAKUTANI_K', 'KAKUTANI_SEED', 'KAKUTANI_STEPS',
                'KAKUTANI_HORIZON', 'KAKUTANI_FORMAT', 'KAKUTANI_OUTPUT', 'LOG_LEVEL'):
        monkeypatch.delenv(key, raising=False)
