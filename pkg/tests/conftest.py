"""Test configuration and fixtures"""
import pytest
import sys
import os
from unittest.mock import patch

from hypothesis import HealthCheck, settings

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

# property tests share read-only config fixtures
settings.register_profile('hybridmem', deadline=None,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile('hybridmem')

from hybridmem.app import create_app
from hybridmem.config import ExperimentConfigLoader
from hybridmem.config.loader import deep_merge

from tests.fixtures.sample_data import SMALL_CONFIG, SYNTHETIC_TRACE, records


@pytest.fixture
def app():
    """Testing runtime profile"""
    return create_app('testing')


@pytest.fixture
def loader():
    """Experiment config loader over the packaged defaults"""
    return ExperimentConfigLoader()


@pytest.fixture
def make_config(loader):
    """Build a small-geometry experiment config with overrides merged on top"""
    def _make(overrides=None, base=SMALL_CONFIG):
        return loader.from_dict(deep_merge(base, overrides or {}))
    return _make


@pytest.fixture
def small_config(make_config):
    """Small-geometry config: 8-page MigrantStore, 32-page hardware cache"""
    return make_config()


@pytest.fixture
def default_config(loader):
    """Packaged defaults with a synthetic trace"""
    return loader.from_dict({'trace': {'synthetic': SYNTHETIC_TRACE}})


@pytest.fixture
def single_read():
    """One cold read miss"""
    return records((100, 0, 'R', 0x1000))


@pytest.fixture(autouse=True)
def setup_test_environment():
    """Set up test environment variables"""
    with patch.dict(os.environ, {'HYBRIDMEM_ENV': 'testing'}):
        yield
