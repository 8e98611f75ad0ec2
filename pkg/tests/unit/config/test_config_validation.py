"""Unit tests for ConfigValidator"""
from unittest.mock import Mock

import pytest

from hybridmem.config.validation import ConfigValidator

pytestmark = pytest.mark.unit


class TestRuntimeValidation:
    """Test cases for runtime profile validation"""

    def test_validate_logging_config_success(self):
        """Test a known log level passes"""
        config = Mock()
        config.LOG_LEVEL = 'info'
        assert ConfigValidator.validate_logging_config(config) == []

    def test_validate_logging_config_invalid_level(self):
        """Test an unknown log level is reported"""
        config = Mock()
        config.LOG_LEVEL = 'VERBOSE'

        errors = ConfigValidator.validate_logging_config(config)

        assert len(errors) == 1
        assert "LOG_LEVEL must be one of" in errors[0]

    def test_validate_runtime_production_debug_warning(self):
        """Test DEBUG in production is a warning, not an error"""
        config = Mock()
        config.LOG_LEVEL = 'WARNING'
        config.DEBUG = True

        result = ConfigValidator.validate_runtime(config, 'production')

        assert result['valid'] is True
        assert result['warnings'] == ["DEBUG mode should be disabled in production"]
        assert result['environment'] == 'production'


class TestExperimentValidation:
    """Test cases for experiment cross-field checks"""

    def test_small_config_is_valid(self, small_config):
        """Test the small test geometry passes every check"""
        result = ConfigValidator.validate_experiment(small_config)
        assert result == {'valid': True, 'errors': [], 'warnings': []}

    def test_capacity_must_tile_rows(self, small_config):
        """Test a MigrantStore capacity that is not a whole number of row groups fails"""
        config = small_config.with_updates(migrantstore_capacity=3 * 8192)

        errors = ConfigValidator.validate_geometry(config)

        assert any('migrantstore_capacity must be divisible' in e for e in errors)

    def test_subblock_must_divide_page(self, small_config):
        """Test a sub-block size that does not divide the page fails"""
        config = small_config.with_policy(subblock_bytes=192)
        assert any('sub-block size 192' in e for e in ConfigValidator.validate_geometry(config))

    def test_hw_cache_block_is_a_page(self, small_config):
        """Test the hardware cache block must equal the page size"""
        config = small_config.with_updates(
            hw_cache=small_config.hw_cache.model_copy(update={'block_bytes': 4096}).model_dump())
        assert "hw_cache.block_bytes must equal page_bytes" in ConfigValidator.validate_geometry(config)

    def test_footprint_exceeds_pcm(self, small_config):
        """Test a synthetic footprint beyond the PCM is rejected"""
        synthetic = small_config.trace.synthetic.model_copy(update={'footprint_pages': 10**6})
        config = small_config.with_updates(trace={'synthetic': synthetic.model_dump()})

        assert ConfigValidator.validate_trace_source(config) == ["synthetic footprint exceeds PCM capacity"]

    def test_repeated_schemes(self, small_config):
        """Test a scheme may appear only once"""
        config = small_config.with_updates(schemes=['pcm_base', 'migrantstore', 'migrantstore'])
        result = ConfigValidator.validate_experiment(config)

        assert result['valid'] is False
        assert "schemes must not repeat" in result['errors']

    def test_missing_baseline_warns(self, small_config):
        """Test leaving out pcm_base only warns"""
        config = small_config.with_updates(schemes=['migrantstore'])
        result = ConfigValidator.validate_experiment(config)

        assert result['valid'] is True
        assert result['warnings'] == ["pcm_base not selected: reports will carry absolute values only"]
