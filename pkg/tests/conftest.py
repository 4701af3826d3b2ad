"""
Shared fixtures for the foldlab test suite
"""

import os
import random
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from config.settings import SEED
from src.foldlab.realizations import get_realization
from src.middleware.cache import cache_manager


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-scale checks (deselect with -m 'not slow')")


@pytest.fixture
def cache_dir(tmp_path):
    """Point the global cache manager at a fresh file cache"""
    previous = (cache_manager.cache_dir, cache_manager.enabled, cache_manager.backend)
    cache_manager.backend = "file"
    cache_manager.reconfigure(cache_dir=str(tmp_path / "cache"), enabled=True)
    yield tmp_path / "cache"
    cache_manager.backend = previous[2]
    cache_manager.reconfigure(cache_dir=previous[0], enabled=previous[1])


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def sl2():
    return get_realization("sl2")


@pytest.fixture(scope="session")
def sl3():
    return get_realization("sl3")


@pytest.fixture(scope="session")
def sl4():
    return get_realization("sl4")


@pytest.fixture(scope="session")
def sp4():
    return get_realization("sp4")
