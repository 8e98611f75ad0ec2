"""Development environment configuration"""
from .base import BaseConfig


class DevelopmentConfig(BaseConfig):
    """Development configuration with verbose logging"""

    DEBUG = True
    LOG_LEVEL = 'DEBUG'
