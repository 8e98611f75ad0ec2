"""Production environment configuration"""
from .base import BaseConfig


class ProductionConfig(BaseConfig):
    """Batch runs on shared machines: quiet logs, no progress bars"""

    DEBUG = False
    LOG_LEVEL = 'WARNING'
    SHOW_PROGRESS = False
