"""Configuration factory for loading environment-specific settings"""
import logging
import os
from typing import Optional, Type

from .base import BaseConfig
from .development import DevelopmentConfig
from .production import ProductionConfig
from .testing import TestingConfig
from .validation import ConfigValidator
from ..services.exceptions import ConfigurationError

logger = logging.getLogger(__name__)

ENV_VAR = 'HYBRIDMEM_ENV'


class ConfigFactory:
    """Factory for creating runtime configuration objects based on environment"""

    CONFIG_MAP = {
        'development': DevelopmentConfig,
        'production': ProductionConfig,
        'testing': TestingConfig,
    }

    @classmethod
    def get_config(cls, env: Optional[str] = None) -> Type[BaseConfig]:
        """
        Get configuration class for the specified environment.

        Args:
            env: Environment name. If None, uses HYBRIDMEM_ENV or defaults to 'development'

        Returns:
            Configuration class for the environment

        Raises:
            ConfigurationError: If environment is not supported
        """
        if env is None:
            env = os.getenv(ENV_VAR, 'development')

        config_class = cls.CONFIG_MAP.get(env.lower())
        if not config_class:
            raise ConfigurationError(f"Unsupported environment: {env}. "
                                     f"Supported environments: {list(cls.CONFIG_MAP.keys())}")
        return config_class

    @classmethod
    def create_config(cls, env: Optional[str] = None, validate: bool = True) -> BaseConfig:
        """Create and validate the runtime configuration instance"""
        if env is None:
            env = os.getenv(ENV_VAR, 'development')

        config = cls.get_config(env)()
        try:
            config.validate_required_settings()
        except ValueError as e:
            raise ConfigurationError(str(e)) from e

        if validate:
            result = ConfigValidator.validate_runtime(config, env)
            if not result['valid']:
                raise ConfigurationError(
                    f"Configuration validation failed: {'; '.join(result['errors'])}")

        logger.debug(f"Loaded {env} runtime configuration")
        return config
