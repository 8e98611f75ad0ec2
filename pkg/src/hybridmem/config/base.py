"""Base configuration settings"""
import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class BaseConfig:
    """Base configuration class with common settings"""

    DEBUG = False
    TESTING = False

    # Logging settings
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    # Experiment defaults
    DEFAULTS_FILE_PATH = os.getenv('HYBRIDMEM_DEFAULTS',
                                   str(Path(__file__).parent / 'defaults.yaml'))
    DEFAULT_JOBS = int(os.getenv('HYBRIDMEM_JOBS', '1'))
    SHOW_PROGRESS = True

    @classmethod
    def validate_required_settings(cls) -> None:
        """Validate that required settings are present"""
        if not Path(cls.DEFAULTS_FILE_PATH).is_file():
            raise ValueError(f"Defaults file not found: {cls.DEFAULTS_FILE_PATH}")
        if cls.DEFAULT_JOBS < 1:
            raise ValueError("HYBRIDMEM_JOBS must be a positive integer")
