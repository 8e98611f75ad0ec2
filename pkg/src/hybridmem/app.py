"""Application factory: runtime profile and logging"""
import logging
from typing import Any, Mapping, Optional

from dotenv import load_dotenv

from .config import BaseConfig, ConfigFactory

# Load environment variables from .env file
load_dotenv()

DEFAULT_LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(config: BaseConfig) -> None:
    logging.basicConfig(
        level=getattr(logging, str(getattr(config, 'LOG_LEVEL', 'INFO')).upper(), logging.INFO),
        format=getattr(config, 'LOG_FORMAT', DEFAULT_LOG_FORMAT),
        force=True,
    )


def create_app(config_name: Optional[str] = None,
               test_config: Optional[Mapping[str, Any]] = None) -> BaseConfig:
    """
    Resolve the runtime profile and configure logging

    Args:
        config_name: Environment configuration name (development, production, testing)
        test_config: Optional mapping of settings overriding the profile

    Returns:
        Runtime configuration instance
    """
    config = ConfigFactory.create_config(config_name)
    if test_config:
        for key, value in test_config.items():
            setattr(config, key, value)
    configure_logging(config)
    return config
