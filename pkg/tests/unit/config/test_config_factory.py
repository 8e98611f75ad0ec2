"""Unit tests for ConfigFactory and the runtime profiles"""
import logging
import os
from unittest.mock import patch

import pytest

from hybridmem.app import create_app
from hybridmem.config.base import BaseConfig
from hybridmem.config.development import DevelopmentConfig
from hybridmem.config.factory import ConfigFactory
from hybridmem.config.production import ProductionConfig
from hybridmem.config.testing import TestingConfig
from hybridmem.services.exceptions import ConfigurationError

pytestmark = pytest.mark.unit


class TestConfigFactory:
    """Test cases for ConfigFactory"""

    @pytest.mark.parametrize('env,expected', [
        ('development', DevelopmentConfig),
        ('production', ProductionConfig),
        ('testing', TestingConfig),
    ])
    def test_get_config(self, env, expected):
        """Test each environment maps to its profile"""
        assert ConfigFactory.get_config(env) == expected

    def test_get_config_invalid_environment(self):
        """Test getting config for an invalid environment"""
        with pytest.raises(ConfigurationError, match="Unsupported environment: invalid"):
            ConfigFactory.get_config('invalid')

    def test_get_config_case_insensitive(self):
        """Test that environment names are case insensitive"""
        assert ConfigFactory.get_config('PRODUCTION') == ProductionConfig
        assert ConfigFactory.get_config('Testing') == TestingConfig

    @patch.dict(os.environ, {'HYBRIDMEM_ENV': 'production'})
    def test_get_config_from_environment(self):
        """Test getting config from the HYBRIDMEM_ENV variable"""
        assert ConfigFactory.get_config() == ProductionConfig

    @patch.dict(os.environ, {}, clear=True)
    def test_get_config_default_environment(self):
        """Test the default profile when no environment is set"""
        assert ConfigFactory.get_config() == DevelopmentConfig

    def test_create_config_success(self):
        """Test successful config creation"""
        config = ConfigFactory.create_config('testing')

        assert isinstance(config, TestingConfig)
        assert config.SHOW_PROGRESS is False

    @patch.object(DevelopmentConfig, 'validate_required_settings')
    def test_create_config_required_settings_failure(self, mock_validate):
        """Test a missing required setting surfaces as ConfigurationError"""
        mock_validate.side_effect = ValueError("Defaults file not found: /nope")

        with pytest.raises(ConfigurationError, match="Defaults file not found"):
            ConfigFactory.create_config('development')

    @patch('hybridmem.config.factory.ConfigValidator')
    def test_create_config_validation_failure(self, mock_validator):
        """Test runtime validation errors stop config creation"""
        mock_validator.validate_runtime.return_value = {
            'valid': False, 'errors': ['LOG_LEVEL must be one of: DEBUG'], 'warnings': []}

        with pytest.raises(ConfigurationError, match="Configuration validation failed"):
            ConfigFactory.create_config('testing')

    @patch('hybridmem.config.factory.ConfigValidator')
    def test_create_config_skip_validation(self, mock_validator):
        """Test validate=False skips the runtime validator"""
        ConfigFactory.create_config('testing', validate=False)
        mock_validator.validate_runtime.assert_not_called()


class TestBaseConfig:
    """Test cases for BaseConfig"""

    def test_defaults_file_exists(self):
        """Test the packaged defaults file is found"""
        BaseConfig.validate_required_settings()

    @patch.object(BaseConfig, 'DEFAULTS_FILE_PATH', '/nonexistent/defaults.yaml')
    def test_missing_defaults_file(self):
        """Test a missing defaults file is reported"""
        with pytest.raises(ValueError, match="Defaults file not found"):
            BaseConfig.validate_required_settings()

    @patch.object(BaseConfig, 'DEFAULT_JOBS', 0)
    def test_jobs_must_be_positive(self):
        """Test zero worker processes is rejected"""
        with pytest.raises(ValueError, match="HYBRIDMEM_JOBS"):
            BaseConfig.validate_required_settings()


class TestCreateApp:
    """Test cases for the application factory"""

    @patch('hybridmem.app.configure_logging')
    def test_configures_logging(self, mock_logging):
        """Test create_app configures logging from the profile"""
        config = create_app('testing')

        mock_logging.assert_called_once_with(config)
        assert config.LOG_LEVEL == 'ERROR'

    @patch('hybridmem.app.configure_logging')
    def test_test_config_overrides(self, mock_logging):
        """Test explicit settings override the profile"""
        config = create_app('testing', test_config={'DEFAULT_JOBS': 4})
        assert config.DEFAULT_JOBS == 4

    def test_log_level_applied(self, app):
        """Test the root logger follows the testing profile"""
        assert logging.getLogger().level == logging.ERROR
